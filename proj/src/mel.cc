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

#include "genaudio/mel.h"

#include <algorithm>
#include <cmath>

#include "genaudio/error.h"
#include "genaudio/kernels.h"

namespace genaudio {

double MelConfig::log_floor_value() const { return std::log(log_floor); }

void validate(const MelConfig& config, int sample_rate) {
  auto fail = [](const std::string& why) {
    throw Error(ErrorCode::kInvalidConfig, why);
  };
  if (sample_rate <= 0) fail("sample rate must be positive");
  if (config.n_fft < 2) fail("n_fft must be at least 2");
  if (config.hop <= 0 || config.hop > config.n_fft) {
    fail("hop must lie in (0, n_fft]");
  }
  if (config.n_mels < 1) fail("n_mels must be at least 1");
  if (!(config.f_min >= 0.0) || !(config.f_min < config.f_max) ||
      config.f_max > sample_rate / 2.0) {
    fail("need 0 <= f_min < f_max <= sample_rate/2");
  }
  if (!(config.log_floor > 0.0) || !std::isfinite(config.log_floor)) {
    fail("log_floor must be positive");
  }
}

void validate(const MelSpectrogram& mel) {
  if (mel.values.rows() < 1) {
    throw Error(ErrorCode::kEmptyInput, "mel '" + mel.source_id + "' has no frames");
  }
  if (mel.values.cols() != mel.config.n_mels) {
    throw Error(ErrorCode::kShapeMismatch,
                "mel '" + mel.source_id + "' has " +
                    std::to_string(mel.values.cols()) + " bands, config says " +
                    std::to_string(mel.config.n_mels));
  }
  // float32 storage (MEL1) may round the floor down by half an ulp.
  const double floor = mel.config.log_floor_value();
  const double slack = 1e-6 * std::max(1.0, std::abs(floor));
  for (Eigen::Index i = 0; i < mel.values.size(); ++i) {
    const double v = mel.values.data()[i];
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFiniteValues, "mel '" + mel.source_id + "'");
    }
    if (v < floor - slack) {
      throw Error(ErrorCode::kInvalidArgument,
                  "mel '" + mel.source_id + "' has an entry below the log floor");
    }
  }
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

MelFilterbank::MelFilterbank(const MelConfig& config, int sample_rate)
    : config_(config), sample_rate_(sample_rate) {
  validate(config, sample_rate);
  const int m = config.n_mels;
  const int bins = config.num_bins();
  const double mel_lo = hz_to_mel(config.f_min);
  const double mel_hi = hz_to_mel(config.f_max);

  // m + 2 equally spaced mel points: left edge, m centers, right edge.
  std::vector<double> edges(static_cast<size_t>(m) + 2);
  for (int i = 0; i < m + 2; ++i) {
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / (m + 1));
  }
  // Pin the outer edges: the mel round trip can land a hair outside
  // [f_min, f_max] and leak weight into the boundary bins.
  edges.front() = config.f_min;
  edges.back() = config.f_max;
  center_hz_.assign(edges.begin() + 1, edges.end() - 1);

  weights_ = RowMatrix::Zero(m, bins);
  const double bin_hz = static_cast<double>(sample_rate) / config.n_fft;
  for (int f = 0; f < m; ++f) {
    const double left = edges[f];
    const double center = edges[f + 1];
    const double right = edges[f + 2];
    for (int k = 0; k < bins; ++k) {
      const double hz = k * bin_hz;
      if (hz <= left || hz >= right) continue;
      const double w = hz <= center ? (hz - left) / (center - left)
                                    : (right - hz) / (right - center);
      weights_(f, k) = std::max(0.0, w);
    }
  }
}

RowMatrix mel_filterbank(const MelConfig& config, int sample_rate) {
  return MelFilterbank(config, sample_rate).weights();
}

int num_frames(int64_t num_samples, const MelConfig& config) {
  if (num_samples < config.n_fft) return 0;
  return static_cast<int>(1 + (num_samples - config.n_fft) / config.hop);
}

MelSpectrogram mel_spectrogram(const AudioClip& clip, const MelConfig& config) {
  validate(clip);
  return mel_spectrogram(clip, MelFilterbank(config, clip.sample_rate));
}

MelSpectrogram mel_spectrogram(const AudioClip& clip,
                               const MelFilterbank& filterbank) {
  validate(clip);
  const MelConfig& config = filterbank.config();
  if (filterbank.sample_rate() != clip.sample_rate) {
    throw Error(ErrorCode::kInvalidConfig,
                "filterbank built for " +
                    std::to_string(filterbank.sample_rate()) + " Hz, clip '" +
                    clip.source_id + "' is " +
                    std::to_string(clip.sample_rate) + " Hz");
  }
  const int frames = num_frames(static_cast<int64_t>(clip.samples.size()), config);
  if (frames < 1) {
    throw Error(ErrorCode::kClipTooShort,
                "clip '" + clip.source_id + "' has " +
                    std::to_string(clip.samples.size()) +
                    " samples, window needs " + std::to_string(config.n_fft));
  }

  MelSpectrogram mel;
  mel.config = config;
  mel.source_id = clip.source_id;
  mel.values = kernels::parallel::log_mel_frames(
      clip.samples, filterbank.weights(), config, frames);
  return mel;
}

}  // namespace genaudio
