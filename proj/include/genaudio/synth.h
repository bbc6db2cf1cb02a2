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


// Deterministic synthetic audio used as a bundled test corpus: harmonic tone
// sequences, band-limited noise bursts and broadband interferers. Every clip
// is a sequence of distinct sound events so that reordering is meaningful.

#ifndef GENAUDIO_SYNTH_H_
#define GENAUDIO_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "genaudio/audio_io.h"

namespace genaudio {

struct SynthOptions {
  int sample_rate = kDefaultSampleRate;
  double seconds = kDefaultClipSeconds;
  int events_per_clip = 4;
  uint64_t seed = 0;
};

/// A clip of harmonic tone events (fundamental plus two overtones with
/// decaying amplitude), each event at a different seeded pitch.
AudioClip synth_tone_clip(const std::string& id, const SynthOptions& options);

/// A clip of band-pass filtered white-noise bursts with seeded centre
/// frequencies.
AudioClip synth_noise_clip(const std::string& id, const SynthOptions& options);

/// A broadband interferer: a linear chirp overlaid with a click train.
AudioClip synth_interferer_clip(const std::string& id,
                                const SynthOptions& options);

/// The bundled corpus: `tones` tone clips ("tone_00", ...) followed by
/// `noises` noise clips ("noise_00", ...). 10 + 10 by default.
std::vector<AudioClip> synthetic_corpus(const SynthOptions& options,
                                        int tones = 10, int noises = 10);

/// `count` interferer clips named "interferer_00", ...
std::vector<AudioClip> synthetic_interferers(const SynthOptions& options,
                                             int count = 10);

/// Writes each clip as "<dir>/<source_id>.wav" (PCM16), creating dir.
void write_corpus(const std::filesystem::path& dir,
                  const std::vector<AudioClip>& clips);

}  // namespace genaudio

#endif  // GENAUDIO_SYNTH_H_
