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

#ifndef GENAUDIO_BACKBONE_H_
#define GENAUDIO_BACKBONE_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "genaudio/mel.h"
#include "genaudio/types.h"

namespace genaudio {

/// Per-clip embeddings (N x D) and optional pre-softmax class scores (N x C)
/// from one backbone.
struct EmbeddingSet {
  RowMatrix embeddings;
  std::optional<RowMatrix> logits;
  std::vector<std::string> ids;
  std::string backbone_name;

  Eigen::Index size() const { return embeddings.rows(); }
  bool operator==(const EmbeddingSet& other) const;
};

void validate(const EmbeddingSet& set);

struct EmbeddingRow {
  Vector embedding;
  Vector logits;  // empty when the backbone has no classifier head
};

class BackboneProvider {
 public:
  virtual ~BackboneProvider() = default;

  virtual std::string name() const = 0;
  virtual int dim() const = 0;
  virtual int num_classes() const = 0;  // 0 when there are no logits
  // Whether a run may label Frechet scores from this provider as FAD without
  // a desk-mode warning.
  virtual bool fad_backbone() const = 0;

  // Must be deterministic and safe to call concurrently.
  virtual EmbeddingRow embed(const MelSpectrogram& mel) const = 0;
};

inline constexpr double kMelStatsTemperature = 10.0;

/// Built-in stand-in for a neural classifier. Per band m the embedding holds
/// [temporal mean, temporal std (population), mean first difference,
/// share of total linear energy]; D = 4 * M. Logits are the energy shares
/// times kMelStatsTemperature, so C = M.
EmbeddingRow melstats_embed(const MelSpectrogram& mel);

class MelStatsProvider : public BackboneProvider {
 public:
  explicit MelStatsProvider(int n_mels) : n_mels_(n_mels) {}

  std::string name() const override { return "melstats"; }
  int dim() const override { return 4 * n_mels_; }
  int num_classes() const override { return n_mels_; }
  bool fad_backbone() const override { return false; }
  EmbeddingRow embed(const MelSpectrogram& mel) const override;

 private:
  int n_mels_;
};

/// Serves rows of an EMB1 file computed by an external extractor, looked up
/// by clip id. With a non-empty role, "<role>:<id>" is tried before "<id>";
/// this lets one file hold generated and reference clips with equal names.
class PrecomputedProvider : public BackboneProvider {
 public:
  PrecomputedProvider(EmbeddingSet table, std::string name,
                      std::string role = {});

  std::string name() const override { return name_; }
  int dim() const override;
  int num_classes() const override;
  bool fad_backbone() const override { return true; }
  EmbeddingRow embed(const MelSpectrogram& mel) const override;

  // Shares the table; only the lookup role differs.
  PrecomputedProvider with_role(std::string role) const;

 private:
  using Index = std::unordered_map<std::string, Eigen::Index>;

  std::shared_ptr<const EmbeddingSet> table_;
  std::shared_ptr<const Index> index_;
  std::string name_;
  std::string role_;
};

/// Row i of the result corresponds to mels[i]. All mels must share one
/// config. Rows are computed in parallel.
EmbeddingSet embed_set(const std::vector<MelSpectrogram>& mels,
                       const BackboneProvider& provider);

// EMB1 binary: "EMB1", u32 N, u32 D, u32 C, N*D float32 embeddings, then N*C
// float32 logits, little-endian row-major. Ids go to "<path>.ids.json".
void save_embedding_file(const EmbeddingSet& set,
                         const std::filesystem::path& path);

/// Ids come from the sidecar when present, else "0", "1", ... The backbone
/// name is "emb:<filename>".
EmbeddingSet load_embedding_file(const std::filesystem::path& path);

std::filesystem::path ids_sidecar_path(const std::filesystem::path& path);

}  // namespace genaudio

#endif  // GENAUDIO_BACKBONE_H_
