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

#include "genaudio/audio_io.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "genaudio/error.h"

namespace genaudio {
namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint16_t read_u16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

uint32_t read_u32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

void put_u16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

[[noreturn]] void unsupported(const std::filesystem::path& path,
                              const std::string& why) {
  throw Error(ErrorCode::kUnsupportedEncoding, path.string() + ": " + why);
}

struct WavFormat {
  uint16_t format = 0;
  uint16_t channels = 0;
  uint32_t sample_rate = 0;
  uint16_t bits = 0;
};

}  // namespace

void validate(const AudioClip& clip) {
  if (clip.sample_rate <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "clip '" + clip.source_id + "' has non-positive sample rate");
  }
  if (clip.samples.empty()) {
    throw Error(ErrorCode::kEmptyAudio, "clip '" + clip.source_id + "'");
  }
  for (double s : clip.samples) {
    if (!std::isfinite(s) || s < -1.0 || s > 1.0) {
      throw Error(ErrorCode::kNonFiniteValues,
                  "clip '" + clip.source_id +
                      "' holds a sample that is non-finite or outside [-1, 1]");
    }
  }
}

AudioClip load_audio(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kUnreadableFile, path.string());
  }
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kUnreadableFile, path.string());

  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    unsupported(path, "not a RIFF/WAVE container");
  }

  WavFormat fmt;
  bool have_fmt = false;
  const unsigned char* data = nullptr;
  size_t data_size = 0;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const uint32_t size = read_u32(chunk + 4);
    const size_t body = pos + 8;
    const size_t available = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || available < 16) unsupported(path, "short fmt chunk");
      fmt.format = read_u16(chunk + 8);
      fmt.channels = read_u16(chunk + 10);
      fmt.sample_rate = read_u32(chunk + 12);
      fmt.bits = read_u16(chunk + 22);
      if (fmt.format == kFormatExtensible) {
        if (size < 26 || available < 26) unsupported(path, "short extensible fmt");
        // First two bytes of the sub-format GUID carry the plain format tag.
        fmt.format = read_u16(chunk + 8 + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = std::min<size_t>(size, available);
      break;
    }
    // Chunks are padded to even sizes.
    pos = body + size + (size & 1u);
  }

  if (!have_fmt) unsupported(path, "missing fmt chunk");
  if (data == nullptr) unsupported(path, "missing data chunk");
  if (fmt.channels == 0) unsupported(path, "zero channels");
  if (fmt.sample_rate == 0) unsupported(path, "zero sample rate");

  const bool pcm16 = fmt.format == kFormatPcm && fmt.bits == 16;
  const bool float32 = fmt.format == kFormatFloat && fmt.bits == 32;
  if (!pcm16 && !float32) {
    unsupported(path, "format tag " + std::to_string(fmt.format) + " with " +
                          std::to_string(fmt.bits) + " bits per sample");
  }

  const size_t bytes_per_sample = fmt.bits / 8;
  const size_t frame_bytes = bytes_per_sample * fmt.channels;
  const size_t frames = data_size / frame_bytes;
  if (frames == 0) {
    throw Error(ErrorCode::kEmptyAudio, path.string());
  }

  AudioClip clip;
  clip.sample_rate = static_cast<int>(fmt.sample_rate);
  clip.source_id = path.stem().string();
  clip.samples.resize(frames);
  const double inv_channels = 1.0 / fmt.channels;
  for (size_t f = 0; f < frames; ++f) {
    const unsigned char* frame = data + f * frame_bytes;
    double sum = 0.0;
    for (size_t c = 0; c < fmt.channels; ++c) {
      const unsigned char* p = frame + c * bytes_per_sample;
      double v;
      if (pcm16) {
        v = static_cast<int16_t>(read_u16(p)) / 32768.0;
      } else {
        v = static_cast<double>(std::bit_cast<float>(read_u32(p)));
        if (!std::isfinite(v)) {
          throw Error(ErrorCode::kNonFiniteValues, path.string());
        }
      }
      sum += v;
    }
    clip.samples[f] = std::clamp(fmt.channels == 1 ? sum : sum * inv_channels,
                                 -1.0, 1.0);
  }
  return clip;
}

void write_wav(const std::filesystem::path& path, const AudioClip& clip,
               WavEncoding encoding) {
  validate(clip);
  const bool pcm16 = encoding == WavEncoding::kPcm16;
  const uint16_t bits = pcm16 ? 16 : 32;
  const uint32_t data_bytes =
      static_cast<uint32_t>(clip.samples.size() * (bits / 8));

  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put_u32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, pcm16 ? kFormatPcm : kFormatFloat);
  put_u16(out, 1);
  put_u32(out, static_cast<uint32_t>(clip.sample_rate));
  put_u32(out, static_cast<uint32_t>(clip.sample_rate) * (bits / 8));
  put_u16(out, bits / 8);
  put_u16(out, bits);
  out += "data";
  put_u32(out, data_bytes);
  for (double s : clip.samples) {
    if (pcm16) {
      const double scaled = std::round(s * 32768.0);
      put_u16(out, static_cast<uint16_t>(static_cast<int16_t>(
                       std::clamp(scaled, -32768.0, 32767.0))));
    } else {
      put_u32(out, std::bit_cast<uint32_t>(static_cast<float>(s)));
    }
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::kIoFailure, path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw Error(ErrorCode::kIoFailure, path.string());
}

AudioClip fit_duration(const AudioClip& clip, double seconds) {
  if (!(seconds > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "duration must be positive");
  }
  AudioClip out = clip;
  const auto target =
      static_cast<size_t>(std::llround(seconds * clip.sample_rate));
  out.samples.resize(target, 0.0);
  return out;
}

}  // namespace genaudio
