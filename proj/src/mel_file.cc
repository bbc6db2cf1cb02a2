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

#include <cmath>
#include <fstream>
#include <iterator>

#include "binary_io.h"
#include "genaudio/error.h"
#include "genaudio/mel.h"

namespace genaudio {

void save_mel(const MelSpectrogram& mel, const std::filesystem::path& path) {
  std::string out = "MEL1";
  binio::put_u32(out, static_cast<uint32_t>(mel.values.rows()));
  binio::put_u32(out, static_cast<uint32_t>(mel.values.cols()));
  for (Eigen::Index i = 0; i < mel.values.size(); ++i) {
    binio::put_f32(out, static_cast<float>(mel.values.data()[i]));
  }
  binio::write_file(path, out);
}

MelSpectrogram load_mel(const std::filesystem::path& path,
                        const MelConfig& config) {
  const std::string bytes = binio::read_file(path);
  binio::Reader reader(bytes, path);
  reader.expect_magic("MEL1");
  const uint32_t frames = reader.u32();
  const uint32_t bands = reader.u32();
  reader.require_floats(static_cast<uint64_t>(frames) * bands);

  MelSpectrogram mel;
  mel.config = config;
  mel.config.n_mels = static_cast<int>(bands);
  mel.source_id = path.stem().string();
  mel.values.resize(frames, bands);
  for (Eigen::Index i = 0; i < mel.values.size(); ++i) {
    const float v = reader.f32();
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFiniteValues, path.string());
    }
    mel.values.data()[i] = v;
  }
  reader.expect_end();
  validate(mel);
  return mel;
}

}  // namespace genaudio
