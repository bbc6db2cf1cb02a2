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

#include "binary_io.h"
#include "genaudio/backbone.h"
#include "genaudio/error.h"
#include "json.hpp"

namespace genaudio {

std::filesystem::path ids_sidecar_path(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".ids.json");
}

void save_embedding_file(const EmbeddingSet& set,
                         const std::filesystem::path& path) {
  validate(set);
  const auto n = static_cast<uint32_t>(set.embeddings.rows());
  const auto d = static_cast<uint32_t>(set.embeddings.cols());
  const auto c = static_cast<uint32_t>(set.logits ? set.logits->cols() : 0);

  std::string out = "EMB1";
  binio::put_u32(out, n);
  binio::put_u32(out, d);
  binio::put_u32(out, c);
  for (Eigen::Index i = 0; i < set.embeddings.size(); ++i) {
    binio::put_f32(out, static_cast<float>(set.embeddings.data()[i]));
  }
  if (set.logits) {
    for (Eigen::Index i = 0; i < set.logits->size(); ++i) {
      binio::put_f32(out, static_cast<float>(set.logits->data()[i]));
    }
  }
  binio::write_file(path, out);
  binio::write_file(ids_sidecar_path(path), nlohmann::json(set.ids).dump());
}

EmbeddingSet load_embedding_file(const std::filesystem::path& path) {
  const std::string bytes = binio::read_file(path);
  binio::Reader reader(bytes, path);
  reader.expect_magic("EMB1");
  const uint32_t n = reader.u32();
  const uint32_t d = reader.u32();
  const uint32_t c = reader.u32();
  reader.require_floats(static_cast<uint64_t>(n) * (static_cast<uint64_t>(d) + c));

  auto read_block = [&](RowMatrix& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      const float v = reader.f32();
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kNonFiniteValues, path.string());
      }
      m.data()[i] = v;
    }
  };

  EmbeddingSet set;
  set.backbone_name = "emb:" + path.filename().string();
  set.embeddings.resize(n, d);
  read_block(set.embeddings);
  if (c > 0) {
    set.logits = RowMatrix(n, c);
    read_block(*set.logits);
  }
  reader.expect_end();

  const std::filesystem::path sidecar = ids_sidecar_path(path);
  if (std::filesystem::exists(sidecar)) {
    nlohmann::json ids;
    try {
      ids = nlohmann::json::parse(binio::read_file(sidecar));
      set.ids = ids.get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kUnsupportedEncoding,
                  sidecar.string() + ": " + e.what());
    }
    if (set.ids.size() != n) {
      throw Error(ErrorCode::kShapeMismatch,
                  sidecar.string() + " holds " + std::to_string(set.ids.size()) +
                      " ids for " + std::to_string(n) + " rows");
    }
  } else {
    set.ids.reserve(n);
    for (uint32_t i = 0; i < n; ++i) set.ids.push_back(std::to_string(i));
  }
  validate(set);
  return set;
}

}  // namespace genaudio
