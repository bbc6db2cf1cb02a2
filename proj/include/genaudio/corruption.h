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

// Controlled degradations of log-mel spectrograms, used to probe how each
// metric reacts as a growing share of a corpus is damaged.

#ifndef GENAUDIO_CORRUPTION_H_
#define GENAUDIO_CORRUPTION_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "genaudio/mel.h"
#include "genaudio/random.h"

namespace genaudio {

enum class CorruptionKind { kNoise, kMask, kInterfere, kReorder };

std::string_view corruption_kind_name(CorruptionKind kind);
CorruptionKind parse_corruption_kind(std::string_view name);

struct CorruptionSpec {
  CorruptionKind kind = CorruptionKind::kNoise;
  double fraction = 0.0;  // share of the corpus corrupted, in [0, 1]
  uint64_t seed = 0;
  int segments = 4;  // reorder only
};

void validate(const CorruptionSpec& spec);

/// Noise variance as a fraction of the clip's value range (max - min).
inline constexpr double kNoiseVarianceOfRange = 0.2;
/// Each mask span covers this fraction of the frames.
inline constexpr double kMaskSpanFraction = 0.1;
inline constexpr int kMaskSpans = 2;

/// Adds i.i.d. Gaussian noise with mean = mean(mel) and
/// variance = 0.2 * (max(mel) - min(mel)), then re-floors.
MelSpectrogram add_noise(const MelSpectrogram& mel, Rng& rng);

struct MaskRecord {
  int span_length = 0;
  std::vector<int> starts;
};

/// Length of each mask span for a T-frame mel: floor(0.1 * T).
int mask_span_length(int frames);

/// Sets two spans of floor(0.1 T) frames, starts drawn uniformly from
/// [0, T - L], to the log floor. Spans may overlap. Needs T >= 20.
MelSpectrogram mask_random(const MelSpectrogram& mel, Rng& rng,
                           MaskRecord* record = nullptr);

/// Mixes at 0 dB: the interferer is scaled so its total linear power equals
/// the target's, powers are summed and the result re-logged.
MelSpectrogram mix_interference(const MelSpectrogram& target,
                                const MelSpectrogram& interferer);

struct ReorderRecord {
  std::vector<int> segment_lengths;
  // Output segment i holds input segment permutation[i].
  std::vector<int> permutation;
};

/// Segment lengths for T frames split into K near-equal contiguous parts;
/// the first T mod K are one frame longer.
std::vector<int> segment_lengths(int frames, int segments);

/// Uniformly drawn permutation of 0..k-1 with no fixed point.
std::vector<int> random_derangement(int k, Rng& rng);

/// Splits the time axis into K segments and permutes them by a derangement.
MelSpectrogram reorder_events(const MelSpectrogram& mel, int segments, Rng& rng,
                              ReorderRecord* record = nullptr);

/// What happened to one corrupted item.
struct CorruptionRecord {
  size_t index = 0;
  std::string id;
  std::optional<MaskRecord> mask;
  std::optional<ReorderRecord> reorder;
  std::string interferer_id;
};

struct CorruptionOutcome {
  std::vector<MelSpectrogram> mels;        // same order and ids as the input
  std::vector<CorruptionRecord> records;   // ascending by index
  std::vector<std::string> warnings;
};

/// Number of items corrupted at `fraction` of `n`: round(fraction * n).
size_t corrupted_count(double fraction, size_t n);

/// Item indices in the order they get corrupted as the fraction grows. A
/// fraction f corrupts the first corrupted_count(f, n) entries, so larger
/// fractions corrupt supersets.
std::vector<size_t> corruption_order(size_t n, uint64_t seed);

/// Corrupts round(fraction * N) items picked by a seeded draw; the rest pass
/// through bit-identical. Each item uses its own generator derived from
/// (seed, kind, id), so items are processed in parallel.
CorruptionOutcome apply_corruption(
    const std::vector<MelSpectrogram>& mels, const CorruptionSpec& spec,
    const std::vector<MelSpectrogram>* interferer_pool = nullptr);

/// "<id>#<kind>@<fraction>", fraction in shortest round-trip form.
std::string corruption_tag(std::string_view id, CorruptionKind kind,
                           double fraction);

}  // namespace genaudio

#endif  // GENAUDIO_CORRUPTION_H_
