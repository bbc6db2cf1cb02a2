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

// Little-endian helpers shared by the MEL1 and EMB1 codecs.

#ifndef GENAUDIO_SRC_BINARY_IO_H_
#define GENAUDIO_SRC_BINARY_IO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>

#include "genaudio/error.h"

namespace genaudio::binio {

inline void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
}

inline void put_f32(std::string& out, float v) {
  put_u32(out, std::bit_cast<uint32_t>(v));
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kUnreadableFile, path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kUnreadableFile, path.string());
  return bytes;
}

inline void write_file(const std::filesystem::path& path,
                       std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoFailure, path.string());
}

class Reader {
 public:
  Reader(std::string_view bytes, const std::filesystem::path& path)
      : bytes_(bytes), path_(path.string()) {}

  void expect_magic(std::string_view magic) {
    if (bytes_.size() < magic.size() ||
        bytes_.substr(0, magic.size()) != magic) {
      throw Error(ErrorCode::kBadMagic,
                  path_ + ": expected '" + std::string(magic) + "'");
    }
    pos_ = magic.size();
  }

  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i]))
           << (8 * i);
    }
    pos_ += 4;
    return v;
  }

  float f32() { return std::bit_cast<float>(u32()); }

  // Checks up front that `count` float32 values remain, so a bogus header
  // cannot trigger a huge allocation.
  void require_floats(uint64_t count) {
    if (count > (bytes_.size() - pos_) / 4) {
      throw Error(ErrorCode::kTruncated, path_);
    }
  }

  void expect_end() const {
    if (pos_ != bytes_.size()) {
      throw Error(ErrorCode::kTruncated,
                  path_ + ": " + std::to_string(bytes_.size() - pos_) +
                      " trailing bytes");
    }
  }

 private:
  void need(size_t n) const {
    if (bytes_.size() - pos_ < n) throw Error(ErrorCode::kTruncated, path_);
  }

  std::string_view bytes_;
  std::string path_;
  size_t pos_ = 0;
};

}  // namespace genaudio::binio

#endif  // GENAUDIO_SRC_BINARY_IO_H_
