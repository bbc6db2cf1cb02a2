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


#include "genaudio/synth.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "genaudio/error.h"
#include "genaudio/random.h"

namespace genaudio {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// A faint noise bed keeps every mel band above the log floor.
constexpr double kNoiseBed = 1e-3;
constexpr double kFadeSeconds = 0.05;

size_t clip_samples(const SynthOptions& options) {
  if (options.sample_rate <= 0 || !(options.seconds > 0.0) ||
      options.events_per_clip < 1) {
    throw Error(ErrorCode::kInvalidArgument, "invalid synthesis options");
  }
  return static_cast<size_t>(std::llround(options.seconds * options.sample_rate));
}

// Raised-cosine fade at both ends of an event of n samples.
double envelope(size_t i, size_t n, size_t fade) {
  fade = std::min(fade, n / 2);
  if (fade == 0) return 1.0;
  const auto ramp = [&](size_t k) {
    return 0.5 - 0.5 * std::cos(std::numbers::pi * static_cast<double>(k) /
                                static_cast<double>(fade));
  };
  if (i < fade) return ramp(i);
  if (i >= n - fade) return ramp(n - 1 - i);
  return 1.0;
}

// Event boundaries splitting n samples into `events` near-equal parts.
std::vector<size_t> event_bounds(size_t n, int events) {
  std::vector<size_t> bounds;
  for (int e = 0; e <= events; ++e) bounds.push_back(n * e / events);
  return bounds;
}

AudioClip finish(const std::string& id, std::vector<double> samples,
                 const SynthOptions& options, Rng& rng) {
  std::normal_distribution<double> bed(0.0, kNoiseBed);
  for (double& s : samples) s = std::clamp(s + bed(rng), -1.0, 1.0);
  AudioClip clip{std::move(samples), options.sample_rate, id};
  validate(clip);
  return clip;
}

// RBJ band-pass biquad (constant 0 dB peak gain).
struct Biquad {
  double b0, b1, b2, a1, a2;
  double x1 = 0, x2 = 0, y1 = 0, y2 = 0;

  Biquad(double center_hz, double q, int rate) {
    const double w0 = kTwoPi * center_hz / rate;
    const double alpha = std::sin(w0) / (2.0 * q);
    const double a0 = 1.0 + alpha;
    b0 = alpha / a0;
    b1 = 0.0;
    b2 = -alpha / a0;
    a1 = -2.0 * std::cos(w0) / a0;
    a2 = (1.0 - alpha) / a0;
  }

  double operator()(double x) {
    const double y = b0 * x + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
    x2 = x1;
    x1 = x;
    y2 = y1;
    y1 = y;
    return y;
  }
};

}  // namespace

AudioClip synth_tone_clip(const std::string& id, const SynthOptions& options) {
  const size_t n = clip_samples(options);
  Rng rng = make_rng(options.seed, "synth-tone/" + id);
  std::uniform_real_distribution<double> log_pitch(std::log(150.0),
                                                   std::log(2500.0));
  std::uniform_real_distribution<double> amplitude(0.2, 0.5);
  const double nyquist = 0.5 * options.sample_rate;
  const auto fade = static_cast<size_t>(kFadeSeconds * options.sample_rate);

  std::vector<double> samples(n, 0.0);
  const std::vector<size_t> bounds = event_bounds(n, options.events_per_clip);
  for (int e = 0; e < options.events_per_clip; ++e) {
    const double f0 = std::exp(log_pitch(rng));
    const double amp = amplitude(rng);
    const size_t begin = bounds[e];
    const size_t len = bounds[e + 1] - begin;
    for (size_t i = 0; i < len; ++i) {
      const double t = static_cast<double>(i) / options.sample_rate;
      double v = 0.0;
      for (int h = 1; h <= 3; ++h) {
        if (h * f0 < nyquist) v += std::sin(kTwoPi * h * f0 * t) / h;
      }
      samples[begin + i] = amp * envelope(i, len, fade) * v / 1.84;
    }
  }
  return finish(id, std::move(samples), options, rng);
}

AudioClip synth_noise_clip(const std::string& id, const SynthOptions& options) {
  const size_t n = clip_samples(options);
  Rng rng = make_rng(options.seed, "synth-noise/" + id);
  std::uniform_real_distribution<double> log_center(std::log(300.0),
                                                    std::log(5000.0));
  std::uniform_real_distribution<double> q_dist(1.0, 4.0);
  std::uniform_real_distribution<double> amplitude(0.3, 0.8);
  std::normal_distribution<double> white(0.0, 1.0);
  const auto fade = static_cast<size_t>(kFadeSeconds * options.sample_rate);
  const double top = 0.45 * options.sample_rate;

  std::vector<double> samples(n, 0.0);
  const std::vector<size_t> bounds = event_bounds(n, options.events_per_clip);
  for (int e = 0; e < options.events_per_clip; ++e) {
    const double center = std::min(std::exp(log_center(rng)), top);
    Biquad filter(center, q_dist(rng), options.sample_rate);
    const double amp = amplitude(rng);
    const size_t begin = bounds[e];
    const size_t len = bounds[e + 1] - begin;
    for (size_t i = 0; i < len; ++i) {
      samples[begin + i] = amp * envelope(i, len, fade) * filter(white(rng)) / 3.0;
    }
  }
  return finish(id, std::move(samples), options, rng);
}

AudioClip synth_interferer_clip(const std::string& id,
                                const SynthOptions& options) {
  const size_t n = clip_samples(options);
  Rng rng = make_rng(options.seed, "synth-interferer/" + id);
  std::uniform_real_distribution<double> start_hz(100.0, 400.0);
  std::uniform_real_distribution<double> end_hz(2000.0, 0.4 * options.sample_rate);
  std::uniform_real_distribution<double> click_rate(2.0, 8.0);
  const double f_start = start_hz(rng);
  const double f_end = end_hz(rng);
  const double rate = click_rate(rng);
  const double duration = static_cast<double>(n) / options.sample_rate;
  const auto period = static_cast<size_t>(options.sample_rate / rate);
  const auto click_len = static_cast<size_t>(0.005 * options.sample_rate);

  std::vector<double> samples(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / options.sample_rate;
    // Phase of a linear chirp from f_start to f_end over the clip.
    const double phase =
        kTwoPi * (f_start * t + 0.5 * (f_end - f_start) * t * t / duration);
    double v = 0.3 * std::sin(phase);
    const size_t k = i % period;
    if (k < click_len) {
      v += 0.5 * std::exp(-static_cast<double>(k) / (0.2 * click_len));
    }
    samples[i] = v;
  }
  return finish(id, std::move(samples), options, rng);
}

namespace {

std::string numbered(const std::string& prefix, int i) {
  std::string digits = std::to_string(i);
  if (digits.size() < 2) digits.insert(0, 2 - digits.size(), '0');
  return prefix + "_" + digits;
}

}  // namespace

std::vector<AudioClip> synthetic_corpus(const SynthOptions& options, int tones,
                                        int noises) {
  std::vector<AudioClip> clips;
  for (int i = 0; i < tones; ++i) {
    clips.push_back(synth_tone_clip(numbered("tone", i), options));
  }
  for (int i = 0; i < noises; ++i) {
    clips.push_back(synth_noise_clip(numbered("noise", i), options));
  }
  return clips;
}

std::vector<AudioClip> synthetic_interferers(const SynthOptions& options,
                                             int count) {
  std::vector<AudioClip> clips;
  for (int i = 0; i < count; ++i) {
    clips.push_back(synth_interferer_clip(numbered("interferer", i), options));
  }
  return clips;
}

void write_corpus(const std::filesystem::path& dir,
                  const std::vector<AudioClip>& clips) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIoFailure,
                "cannot create directory " + dir.string() + ": " + ec.message());
  }
  for (const AudioClip& clip : clips) {
    write_wav(dir / (clip.source_id + ".wav"), clip);
  }
}

}  // namespace genaudio
