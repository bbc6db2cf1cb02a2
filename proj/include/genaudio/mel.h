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

#ifndef GENAUDIO_MEL_H_
#define GENAUDIO_MEL_H_

#include <filesystem>
#include <string>
#include <vector>

#include "genaudio/audio_io.h"
#include "genaudio/types.h"

namespace genaudio {

struct MelConfig {
  int n_fft = 1024;
  int hop = 160;
  int n_mels = 64;
  double f_min = 0.0;
  double f_max = 8000.0;
  double log_floor = 1e-10;

  int num_bins() const { return n_fft / 2 + 1; }
  double log_floor_value() const;

  bool operator==(const MelConfig&) const = default;
};

// Throws ErrorCode::kInvalidConfig when the config is unusable at
// `sample_rate` (hop outside (0, n_fft], f_max above Nyquist, ...).
void validate(const MelConfig& config, int sample_rate);

/// T x M log-mel energies, natural log, floored at ln(log_floor).
struct MelSpectrogram {
  RowMatrix values;
  MelConfig config;
  std::string source_id;

  int num_frames() const { return static_cast<int>(values.rows()); }
  int num_bands() const { return static_cast<int>(values.cols()); }
};

void validate(const MelSpectrogram& mel);

/// HTK mel scale.
double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// Triangular filters with unit peak on the HTK mel scale, M x (n_fft/2+1).
class MelFilterbank {
 public:
  MelFilterbank(const MelConfig& config, int sample_rate);

  const RowMatrix& weights() const { return weights_; }
  // Center frequency of each filter in Hz; strictly increasing.
  const std::vector<double>& center_hz() const { return center_hz_; }
  int sample_rate() const { return sample_rate_; }
  const MelConfig& config() const { return config_; }

 private:
  MelConfig config_;
  int sample_rate_;
  RowMatrix weights_;
  std::vector<double> center_hz_;
};

RowMatrix mel_filterbank(const MelConfig& config, int sample_rate);

/// Number of frames produced for `num_samples` input samples.
int num_frames(int64_t num_samples, const MelConfig& config);

/// Hann-windowed power STFT (no centering), projected onto the filterbank and
/// log-compressed. T = 1 + floor((len - n_fft) / hop).
MelSpectrogram mel_spectrogram(const AudioClip& clip, const MelConfig& config);
MelSpectrogram mel_spectrogram(const AudioClip& clip,
                               const MelFilterbank& filterbank);

// MEL1 binary: "MEL1", u32 T, u32 M, T*M little-endian float32 row-major.
// The id is the file stem. Values are stored as float32, so a round trip is
// bit-exact only for float32-representable data.
void save_mel(const MelSpectrogram& mel, const std::filesystem::path& path);
MelSpectrogram load_mel(const std::filesystem::path& path,
                        const MelConfig& config = {});

}  // namespace genaudio

#endif  // GENAUDIO_MEL_H_
