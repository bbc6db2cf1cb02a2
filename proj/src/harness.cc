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


#include "genaudio/harness.h"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <unordered_set>

#include "genaudio/emit.h"
#include "genaudio/error.h"
#include "genaudio/kernels.h"
#include "genaudio/parallel.h"
#include "genaudio/report.h"

namespace genaudio {
namespace fs = std::filesystem;
namespace {

constexpr std::string_view kEmbPrefix = "emb:";

bool is_corpus_file(const fs::path& path, std::string* kind) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".wav" || ext == ".mel") {
    *kind = ext;
    return true;
  }
  return false;
}

EmbeddingSet embed_one(const std::vector<MelSpectrogram>& mels,
                       std::string_view spec, const MelConfig& mel,
                       const std::string& role) {
  return embed_set(mels, *make_backbone(spec, mel, role));
}

bool wants(const std::vector<Metric>& metrics, Metric m) {
  return std::find(metrics.begin(), metrics.end(), m) != metrics.end();
}

void add_desk_note(MetricReport& report, const BackboneSelection& backbones,
                   const std::vector<Metric>& metrics, const MelConfig& mel) {
  if (!wants(metrics, Metric::kFad)) return;
  if (make_backbone(backbones.fad, mel)->fad_backbone()) return;
  report.notes.push_back(
      "fad: computed from the '" + backbones.fad +
      "' backbone (desk mode); not comparable with VGGish-based FAD values");
}

MelConfig first_config(const std::vector<MelSpectrogram>& mels,
                       const PipelineConfig& pipeline) {
  return mels.empty() ? pipeline.mel : mels.front().config;
}

}  // namespace

std::string pipeline_digest(const PipelineConfig& p) {
  return "sr=" + std::to_string(p.sample_rate) +
         ";clip_s=" + format_number(p.clip_seconds) +
         ";n_fft=" + std::to_string(p.mel.n_fft) +
         ";hop=" + std::to_string(p.mel.hop) +
         ";n_mels=" + std::to_string(p.mel.n_mels) +
         ";f_min=" + format_number(p.mel.f_min) +
         ";f_max=" + format_number(p.mel.f_max) +
         ";log_floor=" + format_number(p.mel.log_floor) +
         ";mel=htk;window=hann_periodic";
}

std::vector<MelSpectrogram> load_corpus(const fs::path& dir,
                                        const PipelineConfig& pipeline) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorCode::kUnreadableFile, "not a directory: " + dir.string());
  }
  validate(pipeline.mel, pipeline.sample_rate);

  std::vector<fs::path> files;
  for (const fs::directory_entry& entry : fs::directory_iterator(dir, ec)) {
    std::string kind;
    if (entry.is_regular_file() && is_corpus_file(entry.path(), &kind)) {
      files.push_back(entry.path());
    }
  }
  if (ec) {
    throw Error(ErrorCode::kUnreadableFile,
                "cannot list " + dir.string() + ": " + ec.message());
  }
  if (files.empty()) {
    throw Error(ErrorCode::kEmptyInput,
                "no .wav or .mel files in " + dir.string());
  }
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });

  const MelFilterbank filterbank(pipeline.mel, pipeline.sample_rate);
  std::vector<MelSpectrogram> mels(files.size());
  parallel_for(files.size(), [&](size_t i) {
    const fs::path& path = files[i];
    try {
      std::string kind;
      is_corpus_file(path, &kind);
      if (kind == ".mel") {
        mels[i] = load_mel(path, pipeline.mel);
      } else {
        AudioClip clip = load_audio(path);
        clip = resample(clip, pipeline.sample_rate);
        clip = fit_duration(clip, pipeline.clip_seconds);
        mels[i] = mel_spectrogram(clip, filterbank);
      }
    } catch (const Error& e) {
      rethrow_with_context(e, path.string());
    }
  });

  std::unordered_set<std::string> seen;
  for (const MelSpectrogram& mel : mels) {
    if (!seen.insert(mel.source_id).second) {
      throw Error(ErrorCode::kDuplicateId,
                  "two files in " + dir.string() + " share the id '" +
                      mel.source_id + "'");
    }
  }
  return mels;
}

std::unique_ptr<BackboneProvider> make_backbone(std::string_view spec,
                                                const MelConfig& mel,
                                                const std::string& role) {
  if (spec == "melstats") return std::make_unique<MelStatsProvider>(mel.n_mels);
  if (spec.substr(0, kEmbPrefix.size()) == kEmbPrefix) {
    const fs::path path(std::string(spec.substr(kEmbPrefix.size())));
    if (path.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "emb: needs a file path");
    }
    EmbeddingSet table = load_embedding_file(path);
    std::string name = table.backbone_name;
    return std::make_unique<PrecomputedProvider>(std::move(table), std::move(name),
                                                 role);
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown backbone '" + std::string(spec) +
                  "' (expected melstats or emb:PATH)");
}

MetricReport evaluate_mels(const std::vector<MelSpectrogram>& generated,
                           const std::vector<MelSpectrogram>& reference,
                           const BackboneSelection& backbones,
                           const std::vector<Metric>& metrics,
                           const PipelineConfig& pipeline) {
  if (generated.empty() || reference.empty()) {
    throw Error(ErrorCode::kEmptyInput, "both sets need at least one clip");
  }
  const MelConfig mel = first_config(generated, pipeline);
  const EmbeddingSet gen_main = embed_one(generated, backbones.main, mel, kGeneratedRole);
  const EmbeddingSet ref_main = embed_one(reference, backbones.main, mel, kReferenceRole);

  MetricReport report;
  if (backbones.fad == backbones.main) {
    report = evaluate_all(SetPair{gen_main, ref_main}, SetPair{gen_main, ref_main},
                          metrics);
  } else {
    const EmbeddingSet gen_fad = embed_one(generated, backbones.fad, mel, kGeneratedRole);
    const EmbeddingSet ref_fad = embed_one(reference, backbones.fad, mel, kReferenceRole);
    report = evaluate_all(SetPair{gen_main, ref_main}, SetPair{gen_fad, ref_fad},
                          metrics);
  }
  report.config_digest += ";" + pipeline_digest(pipeline);
  add_desk_note(report, backbones, metrics, mel);
  return report;
}

MetricReport run_evaluate(const EvaluateOptions& options) {
  if (options.metrics.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no metrics requested");
  }
  const std::vector<MelSpectrogram> generated =
      load_corpus(options.generated_dir, options.pipeline);
  const std::vector<MelSpectrogram> reference =
      load_corpus(options.reference_dir, options.pipeline);
  MetricReport report = evaluate_mels(generated, reference, options.backbones,
                                      options.metrics, options.pipeline);
  if (!options.out.empty()) write_report(report, options.out);
  return report;
}

void validate(const SweepResult& result) {
  if (result.fractions.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "a sweep needs at least 2 fractions");
  }
  if (result.fractions.front() != 0.0 || result.fractions.back() != 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "sweep fractions must span 0 to 1");
  }
  for (size_t i = 1; i < result.fractions.size(); ++i) {
    if (!(result.fractions[i] > result.fractions[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sweep fractions must strictly increase");
    }
  }
  if (result.reports.size() != result.fractions.size() ||
      result.corrupted_ids.size() != result.fractions.size()) {
    throw Error(ErrorCode::kShapeMismatch, "sweep needs one report per fraction");
  }
}

std::vector<double> sweep_grid(int steps) {
  if (steps < 2) {
    throw Error(ErrorCode::kInvalidArgument, "a sweep grid needs steps >= 2");
  }
  std::vector<double> grid(static_cast<size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    grid[i] = static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  return grid;
}

SweepResult run_sweep(const std::vector<MelSpectrogram>& corpus,
                      const std::vector<MelSpectrogram>* interferers,
                      const SweepOptions& options) {
  if (corpus.size() < 10) {
    throw Error(ErrorCode::kInvalidArgument,
                "a sweep needs at least 10 clips, got " +
                    std::to_string(corpus.size()));
  }
  if (options.kind == CorruptionKind::kInterfere &&
      (interferers == nullptr || interferers->empty())) {
    throw Error(ErrorCode::kInvalidArgument,
                "kind=interfere needs an interferer directory");
  }
  const std::vector<double> grid = sweep_grid(options.steps);
  const std::vector<Metric> all = {Metric::kFd, Metric::kIsc, Metric::kKl,
                                   Metric::kFad};
  const MelConfig mel = corpus.front().config;
  const BackboneSelection& backbones = options.backbones;
  const bool shared = backbones.fad == backbones.main;

  // The clean side never changes; embed it once.
  const std::unique_ptr<BackboneProvider> main_gen =
      make_backbone(backbones.main, mel, kGeneratedRole);
  const std::unique_ptr<BackboneProvider> main_ref =
      make_backbone(backbones.main, mel, kReferenceRole);
  std::unique_ptr<BackboneProvider> fad_gen;
  std::unique_ptr<BackboneProvider> fad_ref;
  if (!shared) {
    fad_gen = make_backbone(backbones.fad, mel, kGeneratedRole);
    fad_ref = make_backbone(backbones.fad, mel, kReferenceRole);
  }
  const EmbeddingSet clean_main = embed_set(corpus, *main_ref);
  const EmbeddingSet clean_fad = shared ? clean_main : embed_set(corpus, *fad_ref);

  SweepResult result;
  result.kind = options.kind;
  result.seed = options.seed;
  result.segments = options.segments;
  result.corpus = options.corpus_dir.string();
  result.corpus_size = static_cast<int64_t>(corpus.size());
  result.fractions = grid;

  for (double fraction : grid) {
    try {
      CorruptionSpec spec{options.kind, fraction, options.seed, options.segments};
      CorruptionOutcome outcome = apply_corruption(corpus, spec, interferers);
      std::vector<std::string> ids;
      for (const CorruptionRecord& record : outcome.records) {
        MelSpectrogram& m = outcome.mels[record.index];
        m.source_id = corruption_tag(record.id, options.kind, fraction);
        ids.push_back(m.source_id);
      }
      for (const std::string& w : outcome.warnings) {
        const std::string tagged = "fraction " + format_number(fraction) + ": " + w;
        result.warnings.push_back(tagged);
      }

      const EmbeddingSet gen_main = embed_set(outcome.mels, *main_gen);
      MetricReport report;
      if (shared) {
        report = evaluate_all(SetPair{gen_main, clean_main},
                              SetPair{gen_main, clean_main}, all);
      } else {
        const EmbeddingSet gen_fad = embed_set(outcome.mels, *fad_gen);
        report = evaluate_all(SetPair{gen_main, clean_main},
                              SetPair{gen_fad, clean_fad}, all);
      }
      report.config_digest += ";" + pipeline_digest(options.pipeline);
      add_desk_note(report, backbones, all, mel);
      result.reports.push_back(std::move(report));
      result.corrupted_ids.push_back(std::move(ids));
    } catch (const Error& e) {
      rethrow_with_context(e, "fraction " + format_number(fraction));
    }
  }
  result.fd_backbone = result.reports.front().fd_backbone;
  result.fad_backbone = result.reports.front().fad_backbone;
  result.logits_backbone = result.reports.front().logits_backbone;
  validate(result);
  return result;
}

SweepResult run_sweep(const SweepOptions& options) {
  const std::vector<MelSpectrogram> corpus =
      load_corpus(options.corpus_dir, options.pipeline);
  std::optional<std::vector<MelSpectrogram>> interferers;
  if (options.interferer_dir) {
    interferers = load_corpus(*options.interferer_dir, options.pipeline);
  }
  return run_sweep(corpus, interferers ? &*interferers : nullptr, options);
}

nlohmann::json corruption_metadata(const CorruptionOutcome& outcome,
                                   const CorruptionSpec& spec,
                                   size_t corpus_size) {
  nlohmann::json items = nlohmann::json::array();
  for (const CorruptionRecord& record : outcome.records) {
    nlohmann::json item = {
        {"index", record.index},
        {"id", record.id},
        {"tagged_id", corruption_tag(record.id, spec.kind, spec.fraction)},
    };
    if (record.mask) {
      item["mask"] = {{"span_length", record.mask->span_length},
                      {"starts", record.mask->starts}};
    }
    if (record.reorder) {
      item["reorder"] = {{"segment_lengths", record.reorder->segment_lengths},
                         {"permutation", record.reorder->permutation}};
    }
    if (!record.interferer_id.empty()) item["interferer"] = record.interferer_id;
    items.push_back(std::move(item));
  }
  return {
      {"kind", std::string(corruption_kind_name(spec.kind))},
      {"fraction", spec.fraction},
      {"seed", spec.seed},
      {"segments", spec.segments},
      {"n_items", corpus_size},
      {"n_corrupted", outcome.records.size()},
      {"noise_variance_of_range", kNoiseVarianceOfRange},
      {"mask_span_fraction", kMaskSpanFraction},
      {"mask_spans", kMaskSpans},
      {"items", std::move(items)},
      {"warnings", outcome.warnings},
  };
}

CorruptionOutcome run_corrupt(const CorruptOptions& options) {
  validate(options.spec);
  const std::vector<MelSpectrogram> corpus =
      load_corpus(options.in_dir, options.pipeline);
  std::optional<std::vector<MelSpectrogram>> interferers;
  if (options.interferer_dir) {
    interferers = load_corpus(*options.interferer_dir, options.pipeline);
  }
  CorruptionOutcome outcome = apply_corruption(
      corpus, options.spec, interferers ? &*interferers : nullptr);
  for (const CorruptionRecord& record : outcome.records) {
    outcome.mels[record.index].source_id =
        corruption_tag(record.id, options.spec.kind, options.spec.fraction);
  }

  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIoFailure, "cannot create " + options.out_dir.string() +
                                           ": " + ec.message());
  }
  for (const MelSpectrogram& mel : outcome.mels) {
    save_mel(mel, options.out_dir / (mel.source_id + ".mel"));
  }
  write_text_file(options.out_dir / kCorruptionMetadataFile,
                  dump_json(corruption_metadata(outcome, options.spec, corpus.size())));
  return outcome;
}

std::vector<DiffusionDemoRow> run_diffusion_demo(
    const DiffusionDemoOptions& options) {
  if (options.dim < 1 || options.trials < 2) {
    throw Error(ErrorCode::kInvalidArgument, "diffusion demo needs dim >= 1 and trials >= 2");
  }
  const NoiseSchedule sched =
      make_schedule(options.steps, options.beta_start, options.beta_end);
  const kernels::ChainMoments moments = kernels::parallel::forward_chain_moments(
      sched, options.dim, options.trials, sched.num_steps(), options.seed,
      kernels::ChainStart::kZero);

  std::vector<DiffusionDemoRow> rows;
  for (int n = 1; n <= sched.num_steps(); ++n) {
    DiffusionDemoRow row;
    row.step = n;
    row.empirical_variance = moments.variance.row(n - 1).mean();
    row.expected_variance = 1.0 - sched.alpha_bar(n);
    // Var of a Gaussian sample variance is 2 sigma^4 / (T - 1); averaging
    // d independent coordinates divides it by d.
    row.standard_error =
        row.expected_variance *
        std::sqrt(2.0 / static_cast<double>(options.trials - 1) / options.dim);
    rows.push_back(row);
  }
  return rows;
}

std::string diffusion_demo_csv(const std::vector<DiffusionDemoRow>& rows) {
  std::string out = "n,empirical_variance,one_minus_alpha_bar,standard_error\n";
  for (const DiffusionDemoRow& row : rows) {
    out += std::to_string(row.step) + "," + format_number(row.empirical_variance) +
           "," + format_number(row.expected_variance) + "," +
           format_number(row.standard_error) + "\n";
  }
  return out;
}

}  // namespace genaudio
