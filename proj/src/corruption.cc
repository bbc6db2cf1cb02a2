// Copyright 2026 The genaudio-eval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "genaudio/corruption.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "genaudio/error.h"
#include "genaudio/parallel.h"

namespace genaudio {
namespace {

void refloor(RowMatrix& values, double floor) {
  values = values.cwiseMax(floor);
}

void require_same_shape(const MelSpectrogram& a, const MelSpectrogram& b) {
  if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols() ||
      !(a.config == b.config)) {
    throw Error(ErrorCode::kShapeMismatch,
                "'" + a.source_id + "' and '" + b.source_id +
                    "' differ in shape or config");
  }
}

MelSpectrogram corrupt_one(const MelSpectrogram& mel, const CorruptionSpec& spec,
                           const MelSpectrogram* interferer, Rng& rng,
                           CorruptionRecord& record) {
  switch (spec.kind) {
    case CorruptionKind::kNoise:
      return add_noise(mel, rng);
    case CorruptionKind::kMask: {
      MaskRecord mask;
      MelSpectrogram out = mask_random(mel, rng, &mask);
      record.mask = std::move(mask);
      return out;
    }
    case CorruptionKind::kInterfere:
      record.interferer_id = interferer->source_id;
      return mix_interference(mel, *interferer);
    case CorruptionKind::kReorder: {
      ReorderRecord reorder;
      MelSpectrogram out = reorder_events(mel, spec.segments, rng, &reorder);
      record.reorder = std::move(reorder);
      return out;
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown corruption kind");
}

}  // namespace

std::string_view corruption_kind_name(CorruptionKind kind) {
  switch (kind) {
    case CorruptionKind::kNoise: return "noise";
    case CorruptionKind::kMask: return "mask";
    case CorruptionKind::kInterfere: return "interfere";
    case CorruptionKind::kReorder: return "reorder";
  }
  return "?";
}

CorruptionKind parse_corruption_kind(std::string_view name) {
  for (CorruptionKind k : {CorruptionKind::kNoise, CorruptionKind::kMask,
                           CorruptionKind::kInterfere, CorruptionKind::kReorder}) {
    if (corruption_kind_name(k) == name) return k;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown corruption kind '" + std::string(name) + "'");
}

void validate(const CorruptionSpec& spec) {
  if (!(spec.fraction >= 0.0 && spec.fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "fraction must lie in [0, 1]");
  }
  if (spec.kind == CorruptionKind::kReorder && spec.segments < 2) {
    throw Error(ErrorCode::kInvalidArgument, "reorder needs at least 2 segments");
  }
}

MelSpectrogram add_noise(const MelSpectrogram& mel, Rng& rng) {
  const double range = mel.values.maxCoeff() - mel.values.minCoeff();
  // A constant mel's mean is its value; summation could round it.
  const double mean = range > 0.0 ? mel.values.mean() : mel.values(0, 0);
  const double variance = kNoiseVarianceOfRange * range;

  MelSpectrogram out = mel;
  if (variance > 0.0) {
    std::normal_distribution<double> noise(mean, std::sqrt(variance));
    for (Eigen::Index i = 0; i < out.values.size(); ++i) {
      out.values.data()[i] += noise(rng);
    }
  } else {
    out.values.array() += mean;
  }
  refloor(out.values, mel.config.log_floor_value());
  return out;
}

int mask_span_length(int frames) {
  return static_cast<int>(std::floor(kMaskSpanFraction * frames));
}

MelSpectrogram mask_random(const MelSpectrogram& mel, Rng& rng,
                           MaskRecord* record) {
  const int frames = mel.num_frames();
  if (frames < 20) {
    throw Error(ErrorCode::kInvalidArgument,
                "masking '" + mel.source_id + "' needs at least 20 frames, got " +
                    std::to_string(frames));
  }
  const int span = mask_span_length(frames);
  const double floor = mel.config.log_floor_value();
  std::uniform_int_distribution<int> start_dist(0, frames - span);

  MelSpectrogram out = mel;
  MaskRecord local;
  local.span_length = span;
  for (int s = 0; s < kMaskSpans; ++s) {
    const int start = start_dist(rng);
    local.starts.push_back(start);
    out.values.middleRows(start, span).setConstant(floor);
  }
  if (record != nullptr) *record = std::move(local);
  return out;
}

MelSpectrogram mix_interference(const MelSpectrogram& target,
                                const MelSpectrogram& interferer) {
  require_same_shape(target, interferer);
  const double floor = target.config.log_floor_value();
  if ((interferer.values.array() <= floor).all()) {
    throw Error(ErrorCode::kSilentInterferer,
                "'" + interferer.source_id + "' holds only floor values");
  }
  const Eigen::ArrayXXd target_power = target.values.array().exp();
  const Eigen::ArrayXXd interferer_power = interferer.values.array().exp();
  const double scale = target_power.sum() / interferer_power.sum();

  MelSpectrogram out = target;
  out.values = (target_power + scale * interferer_power)
                   .max(target.config.log_floor)
                   .log()
                   .matrix();
  return out;
}

std::vector<int> segment_lengths(int frames, int segments) {
  if (segments < 2 || frames < segments) {
    throw Error(ErrorCode::kInvalidArgument,
                "reorder needs K >= 2 and T >= K (T=" + std::to_string(frames) +
                    ", K=" + std::to_string(segments) + ")");
  }
  std::vector<int> lengths(static_cast<size_t>(segments), frames / segments);
  for (int i = 0; i < frames % segments; ++i) ++lengths[i];
  return lengths;
}

std::vector<int> random_derangement(int k, Rng& rng) {
  if (k < 2) {
    throw Error(ErrorCode::kInvalidArgument, "no derangement of fewer than 2 items");
  }
  std::vector<int> perm(static_cast<size_t>(k));
  // Rejection sampling keeps the draw uniform over derangements; about e
  // shuffles are needed on average.
  for (;;) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    bool fixed_point = false;
    for (int i = 0; i < k; ++i) fixed_point |= perm[i] == i;
    if (!fixed_point) return perm;
  }
}

MelSpectrogram reorder_events(const MelSpectrogram& mel, int segments, Rng& rng,
                              ReorderRecord* record) {
  const std::vector<int> lengths = segment_lengths(mel.num_frames(), segments);
  std::vector<int> offsets(lengths.size());
  std::exclusive_scan(lengths.begin(), lengths.end(), offsets.begin(), 0);
  const std::vector<int> perm = random_derangement(segments, rng);

  MelSpectrogram out = mel;
  int row = 0;
  for (int i = 0; i < segments; ++i) {
    const int src = perm[i];
    out.values.middleRows(row, lengths[src]) =
        mel.values.middleRows(offsets[src], lengths[src]);
    row += lengths[src];
  }
  if (record != nullptr) *record = {lengths, perm};
  return out;
}

size_t corrupted_count(double fraction, size_t n) {
  return static_cast<size_t>(std::llround(fraction * static_cast<double>(n)));
}

std::vector<size_t> corruption_order(size_t n, uint64_t seed) {
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng = make_rng(seed, "corruption-order");
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

CorruptionOutcome apply_corruption(
    const std::vector<MelSpectrogram>& mels, const CorruptionSpec& spec,
    const std::vector<MelSpectrogram>* interferer_pool) {
  validate(spec);
  const bool interfere = spec.kind == CorruptionKind::kInterfere;
  if (interfere && (interferer_pool == nullptr || interferer_pool->empty())) {
    throw Error(ErrorCode::kInvalidArgument,
                "interference needs a non-empty interferer pool");
  }

  CorruptionOutcome outcome;
  outcome.mels = mels;
  const std::vector<size_t> order = corruption_order(mels.size(), spec.seed);
  const size_t count = corrupted_count(spec.fraction, mels.size());

  // Interferer for the item at rank r: a seeded permutation of the pool
  // (without replacement), then uniform draws once the pool runs out.
  std::vector<size_t> interferer_of(count, 0);
  if (interfere) {
    const size_t pool = interferer_pool->size();
    std::vector<size_t> pool_order(pool);
    std::iota(pool_order.begin(), pool_order.end(), size_t{0});
    Rng pool_rng = make_rng(spec.seed, "interferer-order");
    std::shuffle(pool_order.begin(), pool_order.end(), pool_rng);
    for (size_t r = 0; r < count; ++r) {
      if (r < pool) {
        interferer_of[r] = pool_order[r];
      } else {
        Rng item_rng =
            make_rng(spec.seed, "interferer-pick/" + mels[order[r]].source_id);
        interferer_of[r] =
            std::uniform_int_distribution<size_t>(0, pool - 1)(item_rng);
      }
    }
    if (count > pool) {
      outcome.warnings.push_back(
          "interferer pool (" + std::to_string(pool) + ") is smaller than the " +
          std::to_string(count) + " corrupted clips; sampling with replacement");
    }
  }

  std::vector<CorruptionRecord> records(count);
  const std::string kind_prefix = std::string(corruption_kind_name(spec.kind)) + "/";
  parallel_for(count, [&](size_t r) {
    const size_t index = order[r];
    const MelSpectrogram& mel = mels[index];
    try {
      Rng rng = make_rng(spec.seed, kind_prefix + mel.source_id);
      CorruptionRecord& record = records[r];
      record.index = index;
      record.id = mel.source_id;
      const MelSpectrogram* interferer =
          interfere ? &(*interferer_pool)[interferer_of[r]] : nullptr;
      outcome.mels[index] = corrupt_one(mel, spec, interferer, rng, record);
    } catch (const Error& e) {
      rethrow_with_context(e, "corrupting '" + mel.source_id + "'");
    }
  });

  std::sort(records.begin(), records.end(),
            [](const CorruptionRecord& a, const CorruptionRecord& b) {
              return a.index < b.index;
            });
  outcome.records = std::move(records);
  return outcome;
}

std::string corruption_tag(std::string_view id, CorruptionKind kind,
                           double fraction) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), fraction);
  return std::string(id) + "#" + std::string(corruption_kind_name(kind)) + "@" +
         std::string(buf, res.ptr);
}

}  // namespace genaudio
