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


#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <cstdint>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "genaudio/audio_io.h"
#include "genaudio/error.h"
#include "test_util.h"

namespace genaudio {
namespace {

using testing::TempDir;
using testing::sine;
using testing::throws_code;

void put16(std::string& s, uint16_t v) {
  s.push_back(static_cast<char>(v & 0xFF));
  s.push_back(static_cast<char>(v >> 8));
}
void put32(std::string& s, uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

// Builds a WAVE file by hand so the decoder is checked against the byte
// layout rather than against its own writer.
std::string wav_bytes(uint16_t format, uint16_t channels, uint32_t rate,
                      uint16_t bits, const std::string& payload) {
  std::string fmt;
  put16(fmt, format);
  put16(fmt, channels);
  put32(fmt, rate);
  put32(fmt, rate * channels * bits / 8);
  put16(fmt, static_cast<uint16_t>(channels * bits / 8));
  put16(fmt, bits);
  std::string out = "RIFF";
  put32(out, static_cast<uint32_t>(4 + 8 + fmt.size() + 8 + payload.size()));
  out += "WAVE";
  out += "fmt ";
  put32(out, static_cast<uint32_t>(fmt.size()));
  out += fmt;
  out += "data";
  put32(out, static_cast<uint32_t>(payload.size()));
  out += payload;
  return out;
}

void write_bytes(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream(p, std::ios::binary) << bytes;
}

// Magnitude of the DTFT at `hz`, evaluated directly.
double dtft_magnitude(const std::vector<double>& x, double hz, int rate) {
  std::complex<double> acc = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    acc += x[i] * std::polar(1.0, -2.0 * std::numbers::pi * hz * i / rate);
  }
  return std::abs(acc);
}

TEST(LoadAudio, IdenticalStereoChannelsGiveTheChannel) {
  TempDir dir("audio");
  std::string payload;
  std::vector<int16_t> channel(16000);
  for (int i = 0; i < 16000; ++i) {
    channel[i] = static_cast<int16_t>(std::lround(8000 * std::sin(0.01 * i)));
    put16(payload, static_cast<uint16_t>(channel[i]));
    put16(payload, static_cast<uint16_t>(channel[i]));
  }
  write_bytes(dir / "stereo.wav", wav_bytes(1, 2, 16000, 16, payload));
  const AudioClip clip = load_audio(dir / "stereo.wav");
  ASSERT_EQ(clip.samples.size(), 16000u);
  EXPECT_EQ(clip.sample_rate, 16000);
  EXPECT_EQ(clip.source_id, "stereo");
  for (int i = 0; i < 16000; ++i) {
    EXPECT_EQ(clip.samples[i], channel[i] / 32768.0);
  }
}

TEST(LoadAudio, Pcm16FullScaleSample) {
  TempDir dir("audio");
  std::string payload;
  put16(payload, 32767);
  write_bytes(dir / "one.wav", wav_bytes(1, 1, 16000, 16, payload));
  const AudioClip clip = load_audio(dir / "one.wav");
  ASSERT_EQ(clip.samples.size(), 1u);
  EXPECT_DOUBLE_EQ(clip.samples[0], 32767.0 / 32768.0);
  EXPECT_NEAR(clip.samples[0], 0.99997, 1e-5);
}

TEST(LoadAudio, StereoAverageUsesEqualWeights) {
  TempDir dir("audio");
  std::string payload;
  put16(payload, 16384);
  put16(payload, static_cast<uint16_t>(int16_t{-8192}));
  write_bytes(dir / "mix.wav", wav_bytes(1, 2, 8000, 16, payload));
  EXPECT_DOUBLE_EQ(load_audio(dir / "mix.wav").samples[0], 0.125);
}

TEST(LoadAudio, Float32IsClampedAfterMixdown) {
  TempDir dir("audio");
  std::string payload;
  for (float v : {1.5f, 1.5f, -0.25f, -0.25f}) {
    uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put32(payload, bits);
  }
  write_bytes(dir / "f.wav", wav_bytes(3, 2, 16000, 32, payload));
  const AudioClip clip = load_audio(dir / "f.wav");
  ASSERT_EQ(clip.samples.size(), 2u);
  EXPECT_EQ(clip.samples[0], 1.0);
  EXPECT_EQ(clip.samples[1], -0.25);
}

TEST(LoadAudio, WriterRoundTripsFloat32Exactly) {
  TempDir dir("audio");
  AudioClip clip = sine(440.0, 0.1, 16000, 0.7, "rt");
  for (double& s : clip.samples) s = static_cast<float>(s);
  write_wav(dir / "rt.wav", clip, WavEncoding::kFloat32);
  const AudioClip back = load_audio(dir / "rt.wav");
  EXPECT_EQ(back.samples, clip.samples);
  EXPECT_EQ(back.sample_rate, clip.sample_rate);
}

TEST(LoadAudio, ErrorsAreDistinct) {
  TempDir dir("audio");
  EXPECT_TRUE(throws_code([&] { load_audio(dir / "missing.wav"); },
                          ErrorCode::kUnreadableFile));

  write_bytes(dir / "junk.wav", "RIFX0000WAVEjunk");
  EXPECT_TRUE(throws_code([&] { load_audio(dir / "junk.wav"); },
                          ErrorCode::kUnsupportedEncoding));

  write_bytes(dir / "pcm24.wav", wav_bytes(1, 1, 16000, 24, std::string(6, '\0')));
  EXPECT_TRUE(throws_code([&] { load_audio(dir / "pcm24.wav"); },
                          ErrorCode::kUnsupportedEncoding));

  write_bytes(dir / "empty.wav", wav_bytes(1, 1, 16000, 16, ""));
  EXPECT_TRUE(throws_code([&] { load_audio(dir / "empty.wav"); },
                          ErrorCode::kEmptyAudio));
}

TEST(LoadAudio, ErrorMessageNamesThePath) {
  TempDir dir("audio");
  write_bytes(dir / "bad.wav", "not a wave file at all");
  try {
    load_audio(dir / "bad.wav");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("bad.wav"), std::string::npos);
  }
}

TEST(Validate, RejectsBrokenClips) {
  AudioClip clip = sine(100, 0.01, 16000);
  EXPECT_NO_THROW(validate(clip));
  clip.samples[3] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(validate(clip), Error);
  clip.samples[3] = 1.5;
  EXPECT_THROW(validate(clip), Error);
  clip.samples.clear();
  EXPECT_THROW(validate(clip), Error);
}

TEST(Resample, SameRateIsBitIdentical) {
  const AudioClip clip = sine(440, 0.5, 16000);
  EXPECT_EQ(resample(clip, 16000).samples, clip.samples);
}

TEST(Resample, ConstantUpsampledStaysConstant) {
  AudioClip clip;
  clip.sample_rate = 8000;
  clip.samples.assign(8000, 0.5);
  const AudioClip out = resample(clip, 16000);
  ASSERT_EQ(out.samples.size(), 16000u);
  EXPECT_EQ(out.sample_rate, 16000);
  // Interior: away from the zero-padded edges by more than the filter span.
  for (size_t i = 64; i + 64 < out.samples.size(); ++i) {
    ASSERT_NEAR(out.samples[i], 0.5, 1e-3) << i;
  }
}

TEST(Resample, DurationPreservedWithinOneSample) {
  for (int from : {8000, 22050, 44100, 48000}) {
    for (int to : {16000, 11025, 44100}) {
      const AudioClip clip = sine(300, 0.37, from);
      const AudioClip out = resample(clip, to);
      EXPECT_LE(std::abs(out.duration_seconds() - clip.duration_seconds()), 1.0 / to)
          << from << " -> " << to;
    }
  }
}

TEST(Resample, ToneFrequencyAndRmsSurviveDownsampling) {
  const AudioClip clip = sine(440, 1.0, 44100, 0.5);
  const AudioClip out = resample(clip, 16000);
  ASSERT_EQ(out.samples.size(), 16000u);

  // Peak of the magnitude spectrum on a 1 Hz grid, one bin width (16000/1024
  // Hz) either side counts as a hit.
  double best_hz = 0.0;
  double best = -1.0;
  for (double hz = 100.0; hz <= 1000.0; hz += 1.0) {
    const double m = dtft_magnitude(out.samples, hz, 16000);
    if (m > best) {
      best = m;
      best_hz = hz;
    }
  }
  EXPECT_NEAR(best_hz, 440.0, 16000.0 / 1024.0);

  double rms = 0.0;
  for (size_t i = 100; i + 100 < out.samples.size(); ++i) rms += out.samples[i] * out.samples[i];
  rms = std::sqrt(rms / (out.samples.size() - 200));
  EXPECT_NEAR(rms, 0.5 / std::sqrt(2.0), 0.05 * 0.5 / std::sqrt(2.0));
}

TEST(Resample, ToneRmsSurvivesUpsampling) {
  const AudioClip out = resample(sine(1000, 1.0, 16000, 0.4), 48000);
  double rms = 0.0;
  for (size_t i = 300; i + 300 < out.samples.size(); ++i) rms += out.samples[i] * out.samples[i];
  rms = std::sqrt(rms / (out.samples.size() - 600));
  EXPECT_NEAR(rms, 0.4 / std::sqrt(2.0), 0.05 * 0.4 / std::sqrt(2.0));
}

TEST(Resample, RejectsNonPositiveRate) {
  EXPECT_THROW(resample(sine(100, 0.1, 16000), 0), Error);
}

TEST(FitDuration, PadsAndTruncates) {
  const AudioClip clip = sine(100, 1.0, 1000);
  const AudioClip shorter = fit_duration(clip, 0.5);
  ASSERT_EQ(shorter.samples.size(), 500u);
  EXPECT_TRUE(std::equal(shorter.samples.begin(), shorter.samples.end(),
                         clip.samples.begin()));
  const AudioClip longer = fit_duration(clip, 1.5);
  ASSERT_EQ(longer.samples.size(), 1500u);
  EXPECT_TRUE(std::equal(clip.samples.begin(), clip.samples.end(),
                         longer.samples.begin()));
  for (size_t i = 1000; i < 1500; ++i) EXPECT_EQ(longer.samples[i], 0.0);
}

}  // namespace
}  // namespace genaudio
