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

#include "genaudio/backbone.h"

#include <cmath>
#include <unordered_set>

#include "genaudio/error.h"
#include "genaudio/parallel.h"

namespace genaudio {

bool EmbeddingSet::operator==(const EmbeddingSet& other) const {
  if (ids != other.ids) return false;
  if (embeddings.rows() != other.embeddings.rows() ||
      embeddings.cols() != other.embeddings.cols() ||
      embeddings != other.embeddings) {
    return false;
  }
  if (logits.has_value() != other.logits.has_value()) return false;
  if (!logits) return true;
  return logits->rows() == other.logits->rows() &&
         logits->cols() == other.logits->cols() && *logits == *other.logits;
}

void validate(const EmbeddingSet& set) {
  const std::string what = "embedding set '" + set.backbone_name + "'";
  if (set.embeddings.rows() < 1) {
    throw Error(ErrorCode::kEmptyInput, what + " has no rows");
  }
  if (!set.embeddings.allFinite()) {
    throw Error(ErrorCode::kNonFiniteValues, what + " embeddings");
  }
  if (static_cast<Eigen::Index>(set.ids.size()) != set.embeddings.rows()) {
    throw Error(ErrorCode::kShapeMismatch, what + ": id count vs rows");
  }
  std::unordered_set<std::string> seen;
  for (const std::string& id : set.ids) {
    if (!seen.insert(id).second) {
      throw Error(ErrorCode::kDuplicateId, what + ": '" + id + "'");
    }
  }
  if (set.logits) {
    if (set.logits->rows() != set.embeddings.rows()) {
      throw Error(ErrorCode::kShapeMismatch, what + ": logits row count");
    }
    if (set.logits->cols() < 2) {
      throw Error(ErrorCode::kShapeMismatch, what + ": logits need C >= 2");
    }
    if (!set.logits->allFinite()) {
      throw Error(ErrorCode::kNonFiniteValues, what + " logits");
    }
  }
}

EmbeddingRow melstats_embed(const MelSpectrogram& mel) {
  const RowMatrix& x = mel.values;
  const Eigen::Index frames = x.rows();
  const Eigen::Index bands = x.cols();
  const double peak = x.maxCoeff();

  Vector energy(bands);
  for (Eigen::Index m = 0; m < bands; ++m) {
    double e = 0.0;
    for (Eigen::Index t = 0; t < frames; ++t) e += std::exp(x(t, m) - peak);
    energy[m] = e;
  }
  const double total = energy.sum();

  EmbeddingRow row;
  row.embedding.resize(4 * bands);
  row.logits.resize(bands);
  for (Eigen::Index m = 0; m < bands; ++m) {
    double mean = 0.0;
    for (Eigen::Index t = 0; t < frames; ++t) mean += x(t, m);
    mean /= static_cast<double>(frames);
    double var = 0.0;
    for (Eigen::Index t = 0; t < frames; ++t) {
      const double d = x(t, m) - mean;
      var += d * d;
    }
    var /= static_cast<double>(frames);
    // The first differences telescope.
    const double delta =
        frames > 1 ? (x(frames - 1, m) - x(0, m)) / static_cast<double>(frames - 1)
                   : 0.0;
    const double share = energy[m] / total;

    row.embedding[4 * m + 0] = mean;
    row.embedding[4 * m + 1] = std::sqrt(var);
    row.embedding[4 * m + 2] = delta;
    row.embedding[4 * m + 3] = share;
    row.logits[m] = kMelStatsTemperature * share;
  }
  return row;
}

EmbeddingRow MelStatsProvider::embed(const MelSpectrogram& mel) const {
  if (mel.num_bands() != n_mels_) {
    throw Error(ErrorCode::kShapeMismatch,
                "melstats built for " + std::to_string(n_mels_) +
                    " bands, mel '" + mel.source_id + "' has " +
                    std::to_string(mel.num_bands()));
  }
  return melstats_embed(mel);
}

PrecomputedProvider::PrecomputedProvider(EmbeddingSet table, std::string name,
                                         std::string role)
    : name_(std::move(name)), role_(std::move(role)) {
  validate(table);
  auto index = std::make_shared<Index>();
  for (size_t i = 0; i < table.ids.size(); ++i) {
    index->emplace(table.ids[i], static_cast<Eigen::Index>(i));
  }
  table_ = std::make_shared<const EmbeddingSet>(std::move(table));
  index_ = std::move(index);
}

int PrecomputedProvider::dim() const {
  return static_cast<int>(table_->embeddings.cols());
}

int PrecomputedProvider::num_classes() const {
  return table_->logits ? static_cast<int>(table_->logits->cols()) : 0;
}

EmbeddingRow PrecomputedProvider::embed(const MelSpectrogram& mel) const {
  auto it = index_->end();
  if (!role_.empty()) it = index_->find(role_ + ":" + mel.source_id);
  if (it == index_->end()) it = index_->find(mel.source_id);
  if (it == index_->end()) {
    throw Error(ErrorCode::kProviderFailure,
                name_ + " has no row for id '" + mel.source_id + "'");
  }
  EmbeddingRow row;
  row.embedding = table_->embeddings.row(it->second).transpose();
  if (table_->logits) row.logits = table_->logits->row(it->second).transpose();
  return row;
}

PrecomputedProvider PrecomputedProvider::with_role(std::string role) const {
  PrecomputedProvider copy = *this;
  copy.role_ = std::move(role);
  return copy;
}

EmbeddingSet embed_set(const std::vector<MelSpectrogram>& mels,
                       const BackboneProvider& provider) {
  if (mels.empty()) {
    throw Error(ErrorCode::kEmptyInput, "embed_set needs at least one mel");
  }
  for (const MelSpectrogram& mel : mels) {
    if (!(mel.config == mels.front().config)) {
      throw Error(ErrorCode::kInvalidConfig,
                  "mel '" + mel.source_id + "' uses a different config than '" +
                      mels.front().source_id + "'");
    }
  }

  const auto n = static_cast<Eigen::Index>(mels.size());
  const int d = provider.dim();
  const int c = provider.num_classes();
  EmbeddingSet set;
  set.backbone_name = provider.name();
  set.embeddings.resize(n, d);
  if (c > 0) set.logits = RowMatrix(n, c);
  set.ids.reserve(mels.size());
  for (const MelSpectrogram& mel : mels) set.ids.push_back(mel.source_id);

  parallel_for(mels.size(), [&](size_t i) {
    try {
      const EmbeddingRow row = provider.embed(mels[i]);
      if (row.embedding.size() != d || row.logits.size() != c) {
        throw Error(ErrorCode::kProviderFailure,
                    provider.name() + " returned a row of the wrong shape");
      }
      const auto r = static_cast<Eigen::Index>(i);
      set.embeddings.row(r) = row.embedding.transpose();
      if (c > 0) set.logits->row(r) = row.logits.transpose();
    } catch (const Error& e) {
      rethrow_with_context(e, "embedding '" + mels[i].source_id + "'");
    }
  });
  validate(set);
  return set;
}

}  // namespace genaudio
