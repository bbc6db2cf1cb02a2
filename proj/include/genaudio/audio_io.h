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

#ifndef GENAUDIO_AUDIO_IO_H_
#define GENAUDIO_AUDIO_IO_H_

#include <filesystem>
#include <string>
#include <vector>

namespace genaudio {

inline constexpr int kDefaultSampleRate = 16000;
inline constexpr double kDefaultClipSeconds = 10.0;

/// A mono waveform. Samples lie in [-1, 1].
struct AudioClip {
  std::vector<double> samples;
  int sample_rate = 0;
  std::string source_id;

  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

/// Throws Error if any clip invariant is violated (empty, non-positive rate,
/// non-finite or out-of-range samples).
void validate(const AudioClip& clip);

/// Decodes a RIFF/WAVE file holding PCM16 or IEEE float32 samples with any
/// channel count. Channels are averaged with equal weights and the result is
/// clamped to [-1, 1]. The source id is the file stem.
///
/// Failures carry ErrorCode::kUnreadableFile, kUnsupportedEncoding or
/// kEmptyAudio and name the path.
AudioClip load_audio(const std::filesystem::path& path);

enum class WavEncoding { kPcm16, kFloat32 };

/// Writes a mono WAVE file. Used for fixtures and the synthetic corpus.
void write_wav(const std::filesystem::path& path, const AudioClip& clip,
               WavEncoding encoding = WavEncoding::kPcm16);

/// Windowed-sinc polyphase resampler (64 taps, Kaiser beta 8). Output length
/// is round(n * target / source) so durations agree within one output sample
/// period. Equal rates return the input unchanged.
AudioClip resample(const AudioClip& clip, int target_rate);

/// Truncates or zero-pads to exactly round(seconds * sample_rate) samples.
AudioClip fit_duration(const AudioClip& clip, double seconds);

}  // namespace genaudio

#endif  // GENAUDIO_AUDIO_IO_H_
