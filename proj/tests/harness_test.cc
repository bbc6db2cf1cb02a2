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

#include <algorithm>
#include <cmath>
#include <set>

#include "genaudio/diffusion.h"
#include "genaudio/emit.h"
#include "genaudio/harness.h"
#include "genaudio/metrics.h"
#include "genaudio/report.h"
#include "genaudio/synth.h"
#include "test_util.h"

namespace genaudio {
namespace {

using testing::TempDir;
using testing::throws_code;

constexpr double kSeconds = 2.0;

PipelineConfig short_pipeline() {
  PipelineConfig p;
  p.clip_seconds = kSeconds;
  return p;
}

SynthOptions short_synth(uint64_t seed = 0) {
  SynthOptions o;
  o.seconds = kSeconds;
  o.seed = seed;
  return o;
}

std::vector<MelSpectrogram> mels_of(const std::vector<AudioClip>& clips,
                                    const PipelineConfig& p) {
  std::vector<MelSpectrogram> out;
  for (const AudioClip& c : clips) out.push_back(mel_spectrogram(c, p.mel));
  return out;
}

TEST(LoadCorpus, ReadsWavAndMelSortedByName) {
  TempDir dir("load");
  const PipelineConfig p = short_pipeline();
  // 8 kHz, 3 s: resampled to 16 kHz and trimmed to the clip length.
  write_wav(dir / "b_tone.wav", testing::sine(300.0, 3.0, 8000, 0.5, "b_tone"));
  write_wav(dir / "c_tone.WAV", testing::sine(500.0, 1.0, 16000, 0.5, "c_tone"));
  save_mel(testing::random_mel(40, p.mel.n_mels, 1, "a_mel"), dir / "a_mel.mel");
  write_text_file(dir / "notes.txt", "not audio");

  const std::vector<MelSpectrogram> mels = load_corpus(dir.path(), p);
  ASSERT_EQ(mels.size(), 3u);
  EXPECT_EQ(mels[0].source_id, "a_mel");
  EXPECT_EQ(mels[1].source_id, "b_tone");
  EXPECT_EQ(mels[2].source_id, "c_tone");
  EXPECT_EQ(mels[0].num_frames(), 40);
  const int expected = num_frames(static_cast<int64_t>(kSeconds * 16000), p.mel);
  EXPECT_EQ(mels[1].num_frames(), expected);
  EXPECT_EQ(mels[2].num_frames(), expected);  // zero-padded
}

TEST(LoadCorpus, Errors) {
  const PipelineConfig p = short_pipeline();
  TempDir empty("empty");
  EXPECT_TRUE(throws_code([&] { load_corpus(empty.path(), p); }, ErrorCode::kEmptyInput));
  EXPECT_TRUE(throws_code([&] { load_corpus(empty / "missing", p); },
                          ErrorCode::kUnreadableFile));
  TempDir dup("dup");
  write_wav(dup / "x.wav", testing::sine(300.0, 1.0, 16000));
  save_mel(testing::random_mel(40, p.mel.n_mels, 1, "x"), dup / "x.mel");
  EXPECT_TRUE(throws_code([&] { load_corpus(dup.path(), p); }, ErrorCode::kDuplicateId));
  TempDir bad("bad");
  write_text_file(bad / "broken.wav", "RIFF....");
  try {
    load_corpus(bad.path(), p);
    ADD_FAILURE() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("broken.wav"), std::string::npos) << e.what();
  }
}

TEST(MakeBackbone, Specs) {
  const MelConfig mel;
  EXPECT_EQ(make_backbone("melstats", mel)->name(), "melstats");
  EXPECT_TRUE(throws_code([&] { make_backbone("vggish", mel); },
                          ErrorCode::kInvalidArgument));
  EXPECT_TRUE(throws_code([&] { make_backbone("emb:", mel); },
                          ErrorCode::kInvalidArgument));
}

TEST(Evaluate, SelfEvaluationIsZero) {
  TempDir dir("self");
  const PipelineConfig p = short_pipeline();
  write_corpus(dir.path(), synthetic_corpus(short_synth(), 3, 3));
  EvaluateOptions o;
  o.generated_dir = dir.path();
  o.reference_dir = dir.path();
  o.pipeline = p;
  o.out = dir / "report.json";
  const MetricReport r = run_evaluate(o);
  EXPECT_EQ(r.fd, 0.0);
  EXPECT_EQ(r.fad, 0.0);
  EXPECT_EQ(r.kl, 0.0);
  ASSERT_TRUE(r.isc.has_value());
  EXPECT_GE(*r.isc, 1.0);
  EXPECT_EQ(r.n_generated, 6);
  EXPECT_FALSE(r.notes.empty());  // melstats serves FAD
  EXPECT_EQ(read_report(o.out), r);
}

TEST(Evaluate, TonesVersusNoiseMatchesDirectComputation) {
  const PipelineConfig p = short_pipeline();
  const std::vector<AudioClip> corpus = synthetic_corpus(short_synth(), 6, 6);
  std::vector<AudioClip> tones(corpus.begin(), corpus.begin() + 6);
  std::vector<AudioClip> noise(corpus.begin() + 6, corpus.end());
  TempDir gen("tones");
  TempDir ref("noise");
  write_corpus(gen.path(), tones);
  write_corpus(ref.path(), noise);

  EvaluateOptions o;
  o.generated_dir = gen.path();
  o.reference_dir = ref.path();
  o.metrics = {Metric::kFd, Metric::kFad, Metric::kIsc};
  o.pipeline = p;
  const MetricReport r = run_evaluate(o);
  ASSERT_TRUE(r.fd.has_value());
  EXPECT_GT(*r.fd, 0.0);
  EXPECT_FALSE(r.kl.has_value());

  const std::vector<MelSpectrogram> g = load_corpus(gen.path(), p);
  const std::vector<MelSpectrogram> f = load_corpus(ref.path(), p);
  const MelStatsProvider provider(p.mel.n_mels);
  const double direct = frechet_distance(gaussian_stats(embed_set(g, provider)),
                                         gaussian_stats(embed_set(f, provider)));
  EXPECT_NEAR(*r.fd, direct, 1e-9 * std::max(1.0, direct));
  EXPECT_EQ(*r.fad, *r.fd);
}

TEST(Evaluate, MissingKlPairNamesTheId) {
  const PipelineConfig p = short_pipeline();
  TempDir gen("gen");
  TempDir ref("ref");
  write_wav(gen / "shared.wav", testing::sine(300.0, 1.0, 16000, 0.5));
  write_wav(gen / "lonely.wav", testing::sine(700.0, 1.0, 16000, 0.5));
  write_wav(ref / "shared.wav", testing::sine(300.0, 1.0, 16000, 0.4));
  write_wav(ref / "other.wav", testing::sine(900.0, 1.0, 16000, 0.4));
  EvaluateOptions o;
  o.generated_dir = gen.path();
  o.reference_dir = ref.path();
  o.metrics = {Metric::kKl};
  o.pipeline = p;
  try {
    run_evaluate(o);
    ADD_FAILURE() << "expected a pairing error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnpairedId);
    const std::string msg = e.what();
    EXPECT_TRUE(msg.find("lonely") != std::string::npos ||
                msg.find("other") != std::string::npos)
        << msg;
  }
}

TEST(Sweep, GridMatchesUnitInterval) {
  const std::vector<double> grid = sweep_grid(11);
  ASSERT_EQ(grid.size(), 11u);
  for (int i = 0; i <= 10; ++i) EXPECT_DOUBLE_EQ(grid[i], i / 10.0);
  EXPECT_EQ(grid.front(), 0.0);
  EXPECT_EQ(grid.back(), 1.0);
  EXPECT_TRUE(throws_code([] { sweep_grid(1); }, ErrorCode::kInvalidArgument));
}

class NoiseSweep : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const PipelineConfig p = short_pipeline();
    corpus_ = new std::vector<MelSpectrogram>(
        mels_of(synthetic_corpus(short_synth(), 10, 10), p));
    SweepOptions o;
    o.corpus_dir = "synthetic";
    o.pipeline = p;
    o.seed = 3;
    result_ = new SweepResult(run_sweep(*corpus_, nullptr, o));
  }
  static void TearDownTestSuite() {
    delete result_;
    delete corpus_;
  }
  static std::vector<MelSpectrogram>* corpus_;
  static SweepResult* result_;
};

std::vector<MelSpectrogram>* NoiseSweep::corpus_ = nullptr;
SweepResult* NoiseSweep::result_ = nullptr;

TEST_F(NoiseSweep, ShapeAndZeroRow) {
  const SweepResult& r = *result_;
  EXPECT_NO_THROW(validate(r));
  ASSERT_EQ(r.fractions.size(), 11u);
  EXPECT_EQ(r.corpus_size, 20);
  EXPECT_EQ(r.reports.front().fd, 0.0);
  EXPECT_EQ(r.reports.front().fad, 0.0);
  EXPECT_EQ(r.reports.front().kl, 0.0);
  EXPECT_TRUE(r.corrupted_ids.front().empty());
  EXPECT_EQ(r.corrupted_ids.back().size(), 20u);
  EXPECT_GT(*r.reports.back().fd, *r.reports.front().fd);
  EXPECT_EQ(r.fd_backbone, "melstats");
}

TEST_F(NoiseSweep, CorruptedSetsAreNested) {
  const SweepResult& r = *result_;
  std::set<std::string> previous;
  for (size_t i = 0; i < r.fractions.size(); ++i) {
    std::set<std::string> plain;
    for (const std::string& id : r.corrupted_ids[i]) {
      EXPECT_NE(id.find("#noise@"), std::string::npos) << id;
      plain.insert(std::string(strip_corruption_suffix(id)));
    }
    EXPECT_EQ(plain.size(), corrupted_count(r.fractions[i], 20));
    EXPECT_TRUE(std::includes(plain.begin(), plain.end(), previous.begin(), previous.end()));
    previous = std::move(plain);
  }
}

TEST_F(NoiseSweep, LastRowMatchesDirectRecomputation) {
  CorruptionOutcome outcome =
      apply_corruption(*corpus_, CorruptionSpec{CorruptionKind::kNoise, 1.0, 3, 4});
  const MelStatsProvider provider(corpus_->front().num_bands());
  const double direct = frechet_distance(gaussian_stats(embed_set(outcome.mels, provider)),
                                         gaussian_stats(embed_set(*corpus_, provider)));
  EXPECT_NEAR(*result_->reports.back().fd, direct, 1e-9 * std::max(1.0, direct));
}

TEST_F(NoiseSweep, Deterministic) {
  SweepOptions o;
  o.corpus_dir = "synthetic";
  o.pipeline = short_pipeline();
  o.seed = 3;
  EXPECT_EQ(run_sweep(*corpus_, nullptr, o), *result_);
  EXPECT_EQ(sweep_csv(run_sweep(*corpus_, nullptr, o)), sweep_csv(*result_));
}

TEST(Sweep, Preconditions) {
  const PipelineConfig p = short_pipeline();
  const std::vector<MelSpectrogram> small = testing::random_corpus(9, 60, 64, 1);
  SweepOptions o;
  o.pipeline = p;
  EXPECT_TRUE(throws_code([&] { run_sweep(small, nullptr, o); },
                          ErrorCode::kInvalidArgument));
  const std::vector<MelSpectrogram> ten = testing::random_corpus(10, 60, 64, 1);
  o.kind = CorruptionKind::kInterfere;
  EXPECT_TRUE(throws_code([&] { run_sweep(ten, nullptr, o); },
                          ErrorCode::kInvalidArgument));
  o.kind = CorruptionKind::kNoise;
  o.steps = 1;
  EXPECT_TRUE(throws_code([&] { run_sweep(ten, nullptr, o); },
                          ErrorCode::kInvalidArgument));
}

TEST(Sweep, ErrorsCarryFractionContext) {
  // Clips of 15 frames cannot be masked; the first failing fraction is 0.1.
  const std::vector<MelSpectrogram> tiny = testing::random_corpus(10, 15, 64, 2);
  SweepOptions o;
  o.kind = CorruptionKind::kMask;
  try {
    run_sweep(tiny, nullptr, o);
    ADD_FAILURE() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
    EXPECT_NE(std::string(e.what()).find("fraction 0.1"), std::string::npos) << e.what();
  }
}

TEST(Sweep, InterferenceWithSmallPoolWarns) {
  const std::vector<MelSpectrogram> corpus = testing::random_corpus(10, 60, 64, 4);
  const std::vector<MelSpectrogram> pool = testing::random_corpus(3, 60, 64, 5, "int");
  SweepOptions o;
  o.kind = CorruptionKind::kInterfere;
  o.steps = 3;
  const SweepResult r = run_sweep(corpus, &pool, o);
  EXPECT_EQ(r.reports.front().fd, 0.0);
  EXPECT_FALSE(r.warnings.empty());
  EXPECT_EQ(r.warnings.front().rfind("fraction 0.5: ", 0), 0u) << r.warnings.front();
}

// Stand-ins for embeddings from an external extractor: one row per clean id
// and per tagged id the sweep will ask for.
EmbeddingSet fixture_table(const std::vector<std::string>& clean, CorruptionKind kind,
                           const std::vector<double>& grid, int dim, int classes,
                           uint64_t seed) {
  std::vector<std::string> ids = clean;
  for (double f : grid) {
    if (f == 0.0) continue;
    for (const std::string& id : clean) ids.push_back(corruption_tag(id, kind, f));
  }
  Rng rng = make_rng(seed, "fixture");
  std::normal_distribution<double> g;
  RowMatrix emb(static_cast<Eigen::Index>(ids.size()), dim);
  RowMatrix logits(static_cast<Eigen::Index>(ids.size()), classes);
  for (Eigen::Index r = 0; r < emb.rows(); ++r) {
    // Corrupted rows drift further from the clean cloud at larger fractions.
    const size_t at = ids[r].find('@');
    const double shift = at == std::string::npos ? 0.0 : 4.0 * std::stod(ids[r].substr(at + 1));
    for (int k = 0; k < dim; ++k) emb(r, k) = static_cast<float>(g(rng) + shift);
    for (int k = 0; k < classes; ++k) logits(r, k) = static_cast<float>(g(rng));
  }
  return testing::make_set(emb, ids, logits, "fixture");
}

TEST(Sweep, RunsEndToEndOnPrecomputedEmbeddings) {
  TempDir dir("emb");
  const std::vector<MelSpectrogram> corpus = testing::random_corpus(12, 60, 64, 6);
  for (const MelSpectrogram& m : corpus) save_mel(m, dir / (m.source_id + ".mel"));
  std::vector<std::string> clean;
  for (const MelSpectrogram& m : corpus) clean.push_back(m.source_id);
  const std::vector<double> grid = sweep_grid(6);
  save_embedding_file(fixture_table(clean, CorruptionKind::kReorder, grid, 8, 5, 1),
                      dir / "panns.emb");
  save_embedding_file(fixture_table(clean, CorruptionKind::kReorder, grid, 6, 3, 2),
                      dir / "vggish.emb");

  SweepOptions o;
  o.corpus_dir = dir.path();
  o.kind = CorruptionKind::kReorder;
  o.steps = 6;
  o.backbones.main = "emb:" + (dir / "panns.emb").string();
  o.backbones.fad = "emb:" + (dir / "vggish.emb").string();
  const SweepResult r = run_sweep(o);
  EXPECT_EQ(r.fd_backbone, "emb:panns.emb");
  EXPECT_EQ(r.fad_backbone, "emb:vggish.emb");
  EXPECT_EQ(r.reports.front().fd, 0.0);
  EXPECT_EQ(r.reports.front().fad, 0.0);
  EXPECT_EQ(r.reports.front().kl, 0.0);
  EXPECT_GT(*r.reports.back().fd, 10.0);
  EXPECT_GT(*r.reports.back().fad, 10.0);
  EXPECT_TRUE(r.reports.back().notes.empty());
  for (const MetricReport& rep : r.reports) {
    EXPECT_TRUE(rep.isc.has_value());
    EXPECT_TRUE(rep.kl.has_value());
  }

  // A table missing the tagged rows fails with the offending id.
  save_embedding_file(fixture_table(clean, CorruptionKind::kNoise, grid, 8, 5, 1),
                      dir / "wrong.emb");
  o.backbones.main = "emb:" + (dir / "wrong.emb").string();
  try {
    run_sweep(o);
    ADD_FAILURE() << "expected a lookup error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kProviderFailure);
    EXPECT_NE(std::string(e.what()).find("#reorder@0.2"), std::string::npos) << e.what();
  }
}

TEST(Evaluate, RoleQualifiedPrecomputedRows) {
  TempDir dir("roles");
  TempDir gen("roles_gen");
  const std::vector<MelSpectrogram> corpus = testing::random_corpus(4, 30, 64, 7);
  for (const MelSpectrogram& m : corpus) save_mel(m, gen / (m.source_id + ".mel"));
  std::vector<std::string> ids;
  for (const MelSpectrogram& m : corpus) {
    ids.push_back(std::string(kGeneratedRole) + ":" + m.source_id);
    ids.push_back(std::string(kReferenceRole) + ":" + m.source_id);
  }
  RowMatrix emb(8, 2);
  RowMatrix logits(8, 2);
  for (int i = 0; i < 4; ++i) {
    emb.row(2 * i) << i, 1.0;      // generated
    emb.row(2 * i + 1) << i, 0.0;  // reference: shifted by 1 in coordinate 2
    logits.row(2 * i) << 0.0, 0.0;
    logits.row(2 * i + 1) << 0.0, 0.0;
  }
  save_embedding_file(testing::make_set(emb, ids, logits), dir / "t.emb");
  EvaluateOptions o;
  o.generated_dir = gen.path();
  o.reference_dir = gen.path();
  o.backbones = {"emb:" + (dir / "t.emb").string(), "emb:" + (dir / "t.emb").string()};
  const MetricReport r = run_evaluate(o);
  EXPECT_NEAR(*r.fd, 1.0, 1e-9);
  EXPECT_EQ(*r.kl, 0.0);
}

TEST(Corrupt, WritesTaggedMelsAndMetadata) {
  TempDir in("corrupt_in");
  TempDir out("corrupt_out");
  const std::vector<MelSpectrogram> corpus = testing::random_corpus(10, 60, 64, 8);
  for (const MelSpectrogram& m : corpus) save_mel(m, in / (m.source_id + ".mel"));
  CorruptOptions o;
  o.in_dir = in.path();
  o.out_dir = out / "nested";
  o.spec = {CorruptionKind::kMask, 0.3, 11, 4};
  const CorruptionOutcome outcome = run_corrupt(o);
  ASSERT_EQ(outcome.records.size(), 3u);

  const nlohmann::json meta =
      nlohmann::json::parse(read_text_file(o.out_dir / kCorruptionMetadataFile));
  EXPECT_EQ(meta["kind"], "mask");
  EXPECT_EQ(meta["n_items"], 10);
  EXPECT_EQ(meta["n_corrupted"], 3);
  EXPECT_EQ(meta["items"].size(), 3u);
  EXPECT_EQ(meta["items"][0]["mask"]["span_length"], 6);

  const std::vector<MelSpectrogram> back = load_corpus(o.out_dir, short_pipeline());
  ASSERT_EQ(back.size(), 10u);
  int tagged = 0;
  for (const MelSpectrogram& m : back) {
    if (m.source_id.find("#mask@0.3") != std::string::npos) ++tagged;
  }
  EXPECT_EQ(tagged, 3);

  // Same inputs and seed: byte-identical outputs.
  TempDir again("corrupt_again");
  o.out_dir = again.path();
  run_corrupt(o);
  for (const auto& entry : std::filesystem::directory_iterator(out / "nested")) {
    EXPECT_EQ(read_text_file(entry.path()),
              read_text_file(again / entry.path().filename().string()))
        << entry.path();
  }
}

TEST(DiffusionDemo, VarianceTracksSchedule) {
  DiffusionDemoOptions o;
  o.trials = 20000;
  const std::vector<DiffusionDemoRow> rows = run_diffusion_demo(o);
  ASSERT_EQ(rows.size(), 10u);
  const NoiseSchedule s = make_schedule(10, 1e-4, 0.02);
  for (const DiffusionDemoRow& row : rows) {
    EXPECT_DOUBLE_EQ(row.expected_variance, 1.0 - s.alpha_bar(row.step));
    EXPECT_NEAR(row.empirical_variance, row.expected_variance, 3.0 * row.standard_error);
  }
  const std::string csv = diffusion_demo_csv(rows);
  EXPECT_EQ(csv.rfind("n,empirical_variance,one_minus_alpha_bar,standard_error\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 11);
  EXPECT_TRUE(throws_code([] { run_diffusion_demo({10, 1e-4, 0.02, 0, 10, 0}); },
                          ErrorCode::kInvalidArgument));
}

}  // namespace
}  // namespace genaudio
