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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>

#include "genaudio/audio_io.h"
#include "genaudio/error.h"

namespace genaudio {
namespace {

constexpr int kTaps = 64;
constexpr int kHalfTaps = kTaps / 2;
constexpr double kKaiserBeta = 8.0;
// Phase tables larger than this are evaluated on the fly.
constexpr int64_t kMaxTabulatedPhases = 4096;

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

double kaiser(double x) {
  // x in [-1, 1] across the window.
  const double t = 1.0 - x * x;
  if (t <= 0.0) return 0.0;
  return std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(t)) /
         std::cyl_bessel_i(0.0, kKaiserBeta);
}

// Taps for an output sample that sits `frac` input samples after input index
// `base`. Tap j (0..kTaps-1) multiplies input[base + j - kHalfTaps + 1].
// Each phase is normalized to unit DC gain.
void phase_taps(double frac, double cutoff, double* taps) {
  double sum = 0.0;
  for (int j = 0; j < kTaps; ++j) {
    const double offset = static_cast<double>(j - kHalfTaps + 1) - frac;
    const double w = kaiser(offset / (kHalfTaps + 1));
    taps[j] = 2.0 * cutoff * sinc(2.0 * cutoff * offset) * w;
    sum += taps[j];
  }
  for (int j = 0; j < kTaps; ++j) taps[j] /= sum;
}

}  // namespace

AudioClip resample(const AudioClip& clip, int target_rate) {
  if (target_rate <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "target rate must be positive, got " +
                    std::to_string(target_rate));
  }
  validate(clip);
  if (target_rate == clip.sample_rate) return clip;

  const int64_t g = std::gcd<int64_t>(target_rate, clip.sample_rate);
  const int64_t up = target_rate / g;
  const int64_t down = clip.sample_rate / g;
  const auto n_in = static_cast<int64_t>(clip.samples.size());
  const int64_t n_out = std::max<int64_t>(1, (n_in * up + down / 2) / down);

  // Cutoff in cycles per input sample; lowered when decimating.
  const double cutoff = 0.5 * std::min(1.0, static_cast<double>(up) / down);

  std::vector<double> table;
  const bool tabulated = up <= kMaxTabulatedPhases;
  if (tabulated) {
    table.resize(static_cast<size_t>(up * kTaps));
    for (int64_t p = 0; p < up; ++p) {
      phase_taps(static_cast<double>(p) / up, cutoff, &table[p * kTaps]);
    }
  }

  AudioClip out;
  out.sample_rate = target_rate;
  out.source_id = clip.source_id;
  out.samples.resize(static_cast<size_t>(n_out));
  double scratch[kTaps];
  for (int64_t k = 0; k < n_out; ++k) {
    const int64_t pos = k * down;
    const int64_t base = pos / up;
    const int64_t phase = pos % up;
    const double* taps;
    if (tabulated) {
      taps = &table[phase * kTaps];
    } else {
      phase_taps(static_cast<double>(phase) / up, cutoff, scratch);
      taps = scratch;
    }
    double acc = 0.0;
    for (int j = 0; j < kTaps; ++j) {
      const int64_t idx = base + j - kHalfTaps + 1;
      if (idx < 0 || idx >= n_in) continue;
      acc += taps[j] * clip.samples[static_cast<size_t>(idx)];
    }
    out.samples[static_cast<size_t>(k)] = std::clamp(acc, -1.0, 1.0);
  }
  return out;
}

}  // namespace genaudio
