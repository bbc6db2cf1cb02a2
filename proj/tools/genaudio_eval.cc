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


// genaudio_eval: command-line front end for evaluation, corruption sweeps,
// the diffusion consistency demo, the synthetic corpus and result tables.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "genaudio/corruption.h"
#include "genaudio/emit.h"
#include "genaudio/error.h"
#include "genaudio/harness.h"
#include "genaudio/metrics.h"
#include "genaudio/parallel.h"
#include "genaudio/report.h"
#include "genaudio/synth.h"

namespace {

namespace fs = std::filesystem;
using genaudio::ErrorCode;

void add_pipeline_flags(CLI::App* cmd, genaudio::PipelineConfig* p) {
  cmd->add_option("--sample-rate", p->sample_rate, "Pipeline sample rate in Hz")
      ->capture_default_str();
  cmd->add_option("--clip-seconds", p->clip_seconds,
                  "Clips are truncated or zero-padded to this length")
      ->capture_default_str();
  cmd->add_option("--n-mels", p->mel.n_mels, "Mel bands")->capture_default_str();
  cmd->add_option("--f-max", p->mel.f_max, "Upper mel edge in Hz")
      ->capture_default_str();
}

std::optional<fs::path> optional_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

genaudio::CorruptionKind kind_from(const std::string& name) {
  return genaudio::parse_corruption_kind(name);
}

}  // namespace

int main(int argc, char** argv) {
  genaudio::configure_threads_from_env();

  CLI::App app{"Objective metrics and sensitivity probes for generated audio"};
  app.require_subcommand(1);
  std::function<void()> action;

  // evaluate
  genaudio::EvaluateOptions eval;
  std::string eval_metrics = "fd,isc,kl,fad";
  std::string eval_out;
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Score a generated set against a reference set");
  evaluate->add_option("--generated", eval.generated_dir, "Generated clips")
      ->required();
  evaluate->add_option("--reference", eval.reference_dir, "Reference clips")
      ->required();
  evaluate->add_option("--backbone", eval.backbones.main,
                       "melstats or emb:PATH (FD, IS, KL)")
      ->capture_default_str();
  evaluate->add_option("--fad-backbone", eval.backbones.fad,
                       "melstats or emb:PATH (FAD)")
      ->capture_default_str();
  evaluate->add_option("--metrics", eval_metrics, "Comma-separated subset")
      ->capture_default_str();
  evaluate->add_option("--out", eval_out, "Report JSON (stdout if omitted)");
  add_pipeline_flags(evaluate, &eval.pipeline);
  evaluate->callback([&] {
    action = [&] {
      eval.metrics = genaudio::parse_metric_list(eval_metrics);
      eval.out = eval_out;
      const genaudio::MetricReport report = genaudio::run_evaluate(eval);
      if (eval_out.empty()) std::cout << genaudio::dump_json(genaudio::to_json(report));
      for (const std::string& note : report.notes) std::cerr << "note: " << note << "\n";
    };
  });

  // corrupt
  genaudio::CorruptOptions corrupt_opts;
  std::string corrupt_kind;
  std::string corrupt_interferers;
  CLI::App* corrupt =
      app.add_subcommand("corrupt", "Corrupt a share of a corpus and write MEL1 files");
  corrupt->add_option("--in", corrupt_opts.in_dir, "Input corpus")->required();
  corrupt->add_option("--kind", corrupt_kind, "noise|mask|interfere|reorder")
      ->required();
  corrupt->add_option("--fraction", corrupt_opts.spec.fraction, "Share in [0, 1]")
      ->required();
  corrupt->add_option("--seed", corrupt_opts.spec.seed, "Random seed")
      ->capture_default_str();
  corrupt->add_option("--interferers", corrupt_interferers,
                      "Interferer clips (kind=interfere)");
  corrupt->add_option("--segments", corrupt_opts.spec.segments,
                      "Event segments (kind=reorder)")
      ->capture_default_str();
  corrupt->add_option("--out", corrupt_opts.out_dir, "Output directory")->required();
  add_pipeline_flags(corrupt, &corrupt_opts.pipeline);
  corrupt->callback([&] {
    action = [&] {
      corrupt_opts.spec.kind = kind_from(corrupt_kind);
      corrupt_opts.interferer_dir = optional_path(corrupt_interferers);
      const genaudio::CorruptionOutcome outcome = genaudio::run_corrupt(corrupt_opts);
      for (const std::string& w : outcome.warnings) std::cerr << "warning: " << w << "\n";
      std::cout << "corrupted " << outcome.records.size() << " of "
                << outcome.mels.size() << " clips into "
                << corrupt_opts.out_dir.string() << "\n";
    };
  });

  // sweep
  genaudio::SweepOptions sweep_opts;
  std::string sweep_kind;
  std::string sweep_interferers;
  std::string sweep_csv;
  std::string sweep_json;
  std::string sweep_plot;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Evaluate corrupted-vs-clean over a grid of corrupted fractions");
  sweep->add_option("--corpus", sweep_opts.corpus_dir, "Corpus directory")
      ->required();
  sweep->add_option("--kind", sweep_kind, "noise|mask|interfere|reorder")->required();
  sweep->add_option("--steps", sweep_opts.steps, "Grid size, including 0 and 1")
      ->capture_default_str();
  sweep->add_option("--seed", sweep_opts.seed, "Random seed")->capture_default_str();
  sweep->add_option("--interferers", sweep_interferers,
                    "Interferer clips (kind=interfere)");
  sweep->add_option("--segments", sweep_opts.segments, "Event segments (reorder)")
      ->capture_default_str();
  sweep->add_option("--backbone", sweep_opts.backbones.main, "melstats or emb:PATH")
      ->capture_default_str();
  sweep->add_option("--fad-backbone", sweep_opts.backbones.fad,
                    "melstats or emb:PATH")
      ->capture_default_str();
  sweep->add_option("--out", sweep_csv, "CSV output");
  sweep->add_option("--json", sweep_json, "JSON output");
  sweep->add_option("--plot", sweep_plot, "SVG output");
  add_pipeline_flags(sweep, &sweep_opts.pipeline);
  sweep->callback([&] {
    action = [&] {
      sweep_opts.kind = kind_from(sweep_kind);
      sweep_opts.interferer_dir = optional_path(sweep_interferers);
      const genaudio::SweepResult result = genaudio::run_sweep(sweep_opts);
      genaudio::EmitTargets targets;
      targets.csv = optional_path(sweep_csv);
      targets.json = optional_path(sweep_json);
      targets.svg = optional_path(sweep_plot);
      genaudio::emit_report(result, targets);
      for (const std::string& w : result.warnings) std::cerr << "warning: " << w << "\n";
      if (!targets.csv) std::cout << genaudio::sweep_csv(result);
    };
  });

  // diffusion-demo
  genaudio::DiffusionDemoOptions demo;
  std::string demo_out;
  CLI::App* diffusion = app.add_subcommand(
      "diffusion-demo", "Compare simulated forward-chain variance with 1 - alpha_bar");
  diffusion->add_option("--steps", demo.steps, "Number of diffusion steps")
      ->capture_default_str();
  diffusion->add_option("--beta-start", demo.beta_start, "First beta")
      ->capture_default_str();
  diffusion->add_option("--beta-end", demo.beta_end, "Last beta")
      ->capture_default_str();
  diffusion->add_option("--dim", demo.dim, "Latent dimension")->capture_default_str();
  diffusion->add_option("--trials", demo.trials, "Simulated trajectories")
      ->capture_default_str();
  diffusion->add_option("--seed", demo.seed, "Random seed")->capture_default_str();
  diffusion->add_option("--out", demo_out, "CSV output (stdout if omitted)");
  diffusion->callback([&] {
    action = [&] {
      const std::string csv =
          genaudio::diffusion_demo_csv(genaudio::run_diffusion_demo(demo));
      if (demo_out.empty()) {
        std::cout << csv;
      } else {
        genaudio::write_text_file(demo_out, csv);
      }
    };
  });

  // synth-corpus
  genaudio::SynthOptions synth;
  std::string synth_out;
  std::string synth_interferers;
  int synth_tones = 10;
  int synth_noises = 10;
  int synth_interferer_count = 10;
  CLI::App* synth_cmd = app.add_subcommand(
      "synth-corpus", "Write the deterministic synthetic corpus (tones + noise)");
  synth_cmd->add_option("--out", synth_out, "Corpus directory")->required();
  synth_cmd->add_option("--interferers", synth_interferers,
                        "Also write interferer clips here");
  synth_cmd->add_option("--tones", synth_tones, "Tone clips")->capture_default_str();
  synth_cmd->add_option("--noises", synth_noises, "Noise clips")->capture_default_str();
  synth_cmd->add_option("--interferer-count", synth_interferer_count,
                        "Interferer clips")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  synth_cmd->add_option("--seconds", synth.seconds, "Clip length")
      ->capture_default_str();
  synth_cmd->add_option("--sample-rate", synth.sample_rate, "Sample rate in Hz")
      ->capture_default_str();
  synth_cmd->callback([&] {
    action = [&] {
      if (synth_tones < 0 || synth_noises < 0 || synth_interferer_count < 1) {
        throw genaudio::Error(ErrorCode::kInvalidArgument, "clip counts must be positive");
      }
      const auto clips = genaudio::synthetic_corpus(synth, synth_tones, synth_noises);
      genaudio::write_corpus(synth_out, clips);
      std::cout << "wrote " << clips.size() << " clips to " << synth_out << "\n";
      if (!synth_interferers.empty()) {
        const auto extra =
            genaudio::synthetic_interferers(synth, synth_interferer_count);
        genaudio::write_corpus(synth_interferers, extra);
        std::cout << "wrote " << extra.size() << " interferers to "
                  << synth_interferers << "\n";
      }
    };
  });

  // table
  std::string table_in;
  std::vector<std::string> table_rows;
  std::string table_out;
  std::string table_csv_out;
  std::string table_json_out;
  CLI::App* table_cmd = app.add_subcommand(
      "table", "Render dataset/condition scores in the FD IS KL FAD layout");
  table_cmd->add_option("--in", table_in, "CSV: dataset,condition,fd,isc,kl,fad");
  table_cmd->add_option("--row", table_rows,
                        "One row as dataset,condition,fd,isc,kl,fad (repeatable)");
  table_cmd->add_option("--out", table_out, "Text table (stdout if omitted)");
  table_cmd->add_option("--csv", table_csv_out, "CSV output");
  table_cmd->add_option("--json", table_json_out, "JSON output");
  table_cmd->callback([&] {
    action = [&] {
      std::string csv;
      if (!table_in.empty()) csv = genaudio::read_text_file(table_in);
      for (const std::string& row : table_rows) csv += row + "\n";
      const genaudio::BenchmarkTable table = genaudio::table_from_csv(csv);
      if (table.rows.empty()) {
        throw genaudio::Error(ErrorCode::kInvalidArgument, "no table rows given");
      }
      genaudio::EmitTargets targets;
      targets.text = optional_path(table_out);
      targets.csv = optional_path(table_csv_out);
      targets.json = optional_path(table_json_out);
      genaudio::emit_report(table, targets);
      if (!targets.text) std::cout << genaudio::render_table(table);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (action) action();
    return 0;
  } catch (const genaudio::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return genaudio::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
