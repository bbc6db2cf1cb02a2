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


// End-to-end orchestration: corpus loading, backbone selection, set-vs-set
// evaluation, corruption sweeps and the forward-chain consistency demo.

#ifndef GENAUDIO_HARNESS_H_
#define GENAUDIO_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "genaudio/backbone.h"
#include "genaudio/corruption.h"
#include "genaudio/mel.h"
#include "genaudio/metrics.h"
#include "json.hpp"

namespace genaudio {

/// Front-end settings shared by every command.
struct PipelineConfig {
  int sample_rate = kDefaultSampleRate;
  double clip_seconds = kDefaultClipSeconds;
  MelConfig mel;
};

/// Human-readable summary of the front end, appended to report digests.
std::string pipeline_digest(const PipelineConfig& pipeline);

/// Loads every "*.wav" and "*.mel" file directly inside `dir`, sorted by
/// file name. WAV files go through resample -> fit_duration -> mel; MEL1
/// files are read as-is. Ids are file stems and must be unique.
std::vector<MelSpectrogram> load_corpus(const std::filesystem::path& dir,
                                        const PipelineConfig& pipeline);

/// "melstats" or "emb:PATH". With a role, precomputed tables are looked up
/// as "<role>:<id>" first and "<id>" second.
std::unique_ptr<BackboneProvider> make_backbone(std::string_view spec,
                                                const MelConfig& mel,
                                                const std::string& role = "");

struct BackboneSelection {
  std::string main = "melstats";  // FD, IS and KL
  std::string fad = "melstats";   // FAD
};

inline constexpr const char* kGeneratedRole = "generated";
inline constexpr const char* kReferenceRole = "reference";

/// Embeds both mel sets with the selected backbones and computes the
/// requested metrics. Adds a desk-mode note when FAD comes from a backbone
/// that is not a VGGish-style precomputed table.
MetricReport evaluate_mels(const std::vector<MelSpectrogram>& generated,
                           const std::vector<MelSpectrogram>& reference,
                           const BackboneSelection& backbones,
                           const std::vector<Metric>& metrics,
                           const PipelineConfig& pipeline);

struct EvaluateOptions {
  std::filesystem::path generated_dir;
  std::filesystem::path reference_dir;
  BackboneSelection backbones;
  std::vector<Metric> metrics = {Metric::kFd, Metric::kIsc, Metric::kKl,
                                 Metric::kFad};
  PipelineConfig pipeline;
  std::filesystem::path out;  // report JSON; empty skips writing
};

MetricReport run_evaluate(const EvaluateOptions& options);

struct SweepOptions {
  std::filesystem::path corpus_dir;
  CorruptionKind kind = CorruptionKind::kNoise;
  int steps = 11;
  uint64_t seed = 0;
  std::optional<std::filesystem::path> interferer_dir;
  int segments = 4;
  BackboneSelection backbones;
  PipelineConfig pipeline;
};

struct SweepResult {
  CorruptionKind kind = CorruptionKind::kNoise;
  uint64_t seed = 0;
  int segments = 4;
  std::string corpus;  // corpus directory or label
  int64_t corpus_size = 0;
  std::vector<double> fractions;
  std::vector<MetricReport> reports;  // one per fraction
  std::vector<std::vector<std::string>> corrupted_ids;  // per fraction
  std::string fd_backbone;
  std::string fad_backbone;
  std::string logits_backbone;
  std::vector<std::string> warnings;

  bool operator==(const SweepResult&) const = default;
};

/// Throws unless fractions strictly increase from 0 to 1 with one report
/// (and one id list) per fraction.
void validate(const SweepResult& result);

/// Uniform grid i / (steps - 1), i = 0..steps-1; needs steps >= 2.
std::vector<double> sweep_grid(int steps);

/// Corrupts the corpus at every grid fraction and evaluates corrupted vs.
/// clean with all four metrics. Corrupted items carry tagged ids
/// ("id#kind@fraction") so precomputed tables can hold their embeddings.
SweepResult run_sweep(const std::vector<MelSpectrogram>& corpus,
                      const std::vector<MelSpectrogram>* interferers,
                      const SweepOptions& options);

/// Loads the corpus (and interferers) from disk, then runs the sweep.
SweepResult run_sweep(const SweepOptions& options);

struct CorruptOptions {
  std::filesystem::path in_dir;
  std::filesystem::path out_dir;
  CorruptionSpec spec;
  std::optional<std::filesystem::path> interferer_dir;
  PipelineConfig pipeline;
};

inline constexpr const char* kCorruptionMetadataFile = "corruption.json";

/// Writes one MEL1 file per clip to out_dir (corrupted clips under their
/// tagged ids) plus corruption.json describing what was done.
CorruptionOutcome run_corrupt(const CorruptOptions& options);

nlohmann::json corruption_metadata(const CorruptionOutcome& outcome,
                                   const CorruptionSpec& spec,
                                   size_t corpus_size);

struct DiffusionDemoOptions {
  int steps = 10;
  double beta_start = 1e-4;
  double beta_end = 0.02;
  int dim = 4;
  int64_t trials = 100000;
  uint64_t seed = 0;
};

struct DiffusionDemoRow {
  int step = 0;
  double empirical_variance = 0.0;  // averaged over coordinates
  double expected_variance = 0.0;   // 1 - alpha_bar
  double standard_error = 0.0;      // of the empirical value
};

/// Simulates forward chains from z_0 = 0 and compares the per-step
/// variance with 1 - alpha_bar.
std::vector<DiffusionDemoRow> run_diffusion_demo(const DiffusionDemoOptions& options);

/// "n,empirical_variance,one_minus_alpha_bar,standard_error" plus one row
/// per step.
std::string diffusion_demo_csv(const std::vector<DiffusionDemoRow>& rows);

}  // namespace genaudio

#endif  // GENAUDIO_HARNESS_H_
