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
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>

#include "genaudio/backbone.h"
#include "genaudio/error.h"
#include "genaudio/mel.h"
#include "test_util.h"

namespace genaudio {
namespace {

using testing::TempDir;
using testing::make_set;
using testing::random_mel;
using testing::throws_code;

// Independent long-double evaluation of the melstats definition.
std::vector<long double> melstats_oracle(const MelSpectrogram& mel) {
  const auto& x = mel.values;
  const long T = x.rows();
  const long M = x.cols();
  std::vector<long double> out;
  std::vector<long double> energy(M, 0.0L);
  long double total = 0.0L;
  for (long m = 0; m < M; ++m) {
    for (long t = 0; t < T; ++t) energy[m] += std::exp(static_cast<long double>(x(t, m)));
    total += energy[m];
  }
  for (long m = 0; m < M; ++m) {
    long double mean = 0.0L;
    for (long t = 0; t < T; ++t) mean += x(t, m);
    mean /= T;
    long double var = 0.0L;
    for (long t = 0; t < T; ++t) var += (x(t, m) - mean) * (x(t, m) - mean);
    var /= T;
    long double delta = 0.0L;
    for (long t = 1; t < T; ++t) delta += x(t, m) - x(t - 1, m);
    delta /= (T - 1);
    out.push_back(mean);
    out.push_back(std::sqrt(var));
    out.push_back(delta);
    out.push_back(energy[m] / total);
  }
  return out;
}

TEST(MelStats, MatchesDirectDefinition) {
  const MelSpectrogram mel = random_mel(120, 16, 3, "x");
  const EmbeddingRow row = melstats_embed(mel);
  const std::vector<long double> oracle = melstats_oracle(mel);
  ASSERT_EQ(row.embedding.size(), static_cast<Eigen::Index>(oracle.size()));
  for (size_t i = 0; i < oracle.size(); ++i) {
    EXPECT_NEAR(row.embedding[i], static_cast<double>(oracle[i]),
                1e-12 * std::max(1.0L, std::abs(oracle[i])))
        << i;
  }
  for (int m = 0; m < 16; ++m) {
    EXPECT_NEAR(row.logits[m], kMelStatsTemperature * static_cast<double>(oracle[4 * m + 3]),
                1e-12);
  }
}

TEST(MelStats, ConstantMel) {
  MelSpectrogram mel;
  mel.config.n_mels = 8;
  mel.values = RowMatrix::Constant(50, 8, -3.25);
  const EmbeddingRow row = melstats_embed(mel);
  for (int m = 0; m < 8; ++m) {
    EXPECT_EQ(row.embedding[4 * m + 0], -3.25);
    EXPECT_EQ(row.embedding[4 * m + 1], 0.0);
    EXPECT_EQ(row.embedding[4 * m + 2], 0.0);
    EXPECT_DOUBLE_EQ(row.embedding[4 * m + 3], 1.0 / 8.0);
  }
}

TEST(MelStats, TimeReversalNegatesOnlyTheDelta) {
  const MelSpectrogram mel = random_mel(200, 12, 9, "x");
  MelSpectrogram reversed = mel;
  reversed.values = mel.values.colwise().reverse();
  const EmbeddingRow a = melstats_embed(mel);
  const EmbeddingRow b = melstats_embed(reversed);
  for (int m = 0; m < 12; ++m) {
    for (int k : {0, 1, 3}) {
      EXPECT_NEAR(a.embedding[4 * m + k], b.embedding[4 * m + k],
                  1e-12 * std::max(1.0, std::abs(a.embedding[4 * m + k])));
    }
    EXPECT_EQ(a.embedding[4 * m + 2], -b.embedding[4 * m + 2]);
  }
}

TEST(MelStats, FramePermutationOnlyMovesTheDelta) {
  const MelSpectrogram mel = random_mel(64, 6, 4, "x");
  MelSpectrogram shuffled = mel;
  std::vector<int> perm(64);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng = make_rng(1, uint64_t{2});
  std::shuffle(perm.begin(), perm.end(), rng);
  for (int t = 0; t < 64; ++t) shuffled.values.row(t) = mel.values.row(perm[t]);
  const EmbeddingRow a = melstats_embed(mel);
  const EmbeddingRow b = melstats_embed(shuffled);
  for (int m = 0; m < 6; ++m) {
    for (int k : {0, 1, 3}) {
      EXPECT_NEAR(a.embedding[4 * m + k], b.embedding[4 * m + k], 1e-12);
    }
  }
}

TEST(MelStats, ToneArgmaxIsItsBand) {
  const MelConfig config;
  const MelFilterbank fb(config, 16000);
  int expected = 0;
  for (int i = 1; i < config.n_mels; ++i) {
    if (std::abs(fb.center_hz()[i] - 1000.0) < std::abs(fb.center_hz()[expected] - 1000.0)) {
      expected = i;
    }
  }
  const MelSpectrogram mel = mel_spectrogram(testing::sine(1000, 1.0, 16000), fb);
  Eigen::Index arg;
  melstats_embed(mel).logits.maxCoeff(&arg);
  EXPECT_EQ(arg, expected);
}

TEST(EmbedSet, ShapesAndDeterminism) {
  const MelStatsProvider provider(64);
  const MelSpectrogram a = random_mel(994, 64, 1, "a");
  MelSpectrogram b = a;
  b.source_id = "b";
  const EmbeddingSet set = embed_set({a, b}, provider);
  EXPECT_EQ(set.embeddings.rows(), 2);
  EXPECT_EQ(set.embeddings.cols(), 256);
  ASSERT_TRUE(set.logits.has_value());
  EXPECT_EQ(set.logits->cols(), 64);
  EXPECT_TRUE(set.embeddings.row(0) == set.embeddings.row(1));
  EXPECT_EQ(set.ids, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(set.backbone_name, "melstats");
}

TEST(EmbedSet, PreconditionsAndFailures) {
  const MelStatsProvider provider(64);
  EXPECT_TRUE(throws_code([&] { embed_set({}, provider); }, ErrorCode::kEmptyInput));

  MelSpectrogram a = random_mel(30, 64, 1, "a");
  MelSpectrogram b = random_mel(30, 64, 2, "b");
  b.config.hop = 320;
  EXPECT_TRUE(throws_code([&] { embed_set({a, b}, provider); }, ErrorCode::kInvalidConfig));

  const PrecomputedProvider table(
      make_set(RowMatrix::Ones(1, 3), {"a"}), "emb:t");
  b = random_mel(30, 64, 2, "missing_clip");
  try {
    embed_set({a, b}, table);
    FAIL() << "expected a provider failure";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kProviderFailure);
    EXPECT_NE(std::string(e.what()).find("missing_clip"), std::string::npos);
  }
}

TEST(Precomputed, RoleLookupFallsBackToPlainId) {
  RowMatrix emb(3, 2);
  emb << 1, 1, 2, 2, 3, 3;
  const EmbeddingSet table = make_set(emb, {"x", "generated:x", "y"});
  const PrecomputedProvider plain(table, "emb:t");
  const PrecomputedProvider gen = plain.with_role("generated");
  MelSpectrogram mel = random_mel(4, 4, 1, "x");
  EXPECT_EQ(plain.embed(mel).embedding[0], 1.0);
  EXPECT_EQ(gen.embed(mel).embedding[0], 2.0);
  mel.source_id = "y";
  EXPECT_EQ(gen.embed(mel).embedding[0], 3.0);
  EXPECT_TRUE(plain.fad_backbone());
  EXPECT_EQ(plain.num_classes(), 0);
}

TEST(EmbeddingSetValidate, Invariants) {
  EXPECT_TRUE(throws_code([] { validate(make_set(RowMatrix(0, 3), {})); },
                          ErrorCode::kEmptyInput));
  EXPECT_TRUE(throws_code([] { validate(make_set(RowMatrix::Ones(2, 3), {"a", "a"})); },
                          ErrorCode::kDuplicateId));
  EXPECT_TRUE(throws_code(
      [] { validate(make_set(RowMatrix::Ones(2, 3), {"a", "b"}, RowMatrix::Ones(2, 1))); },
      ErrorCode::kShapeMismatch));
  RowMatrix nan = RowMatrix::Ones(1, 2);
  nan(0, 1) = std::numeric_limits<double>::infinity();
  EXPECT_TRUE(throws_code([&] { validate(make_set(nan, {"a"})); },
                          ErrorCode::kNonFiniteValues));
}

void write_emb1(const std::filesystem::path& path, uint32_t n, uint32_t d, uint32_t c,
                const std::vector<float>& payload) {
  std::string bytes = "EMB1";
  for (uint32_t v : {n, d, c}) {
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  for (float f : payload) {
    uint32_t bits;
    std::memcpy(&bits, &f, 4);
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
  }
  std::ofstream(path, std::ios::binary) << bytes;
}

TEST(Emb1, HandWrittenFile) {
  TempDir dir("emb");
  write_emb1(dir / "x.emb", 2, 3, 0, {1, 2, 3, 4, 5, 6});
  const EmbeddingSet set = load_embedding_file(dir / "x.emb");
  RowMatrix expected(2, 3);
  expected << 1, 2, 3, 4, 5, 6;
  EXPECT_TRUE(set.embeddings == expected);
  EXPECT_FALSE(set.logits.has_value());
  EXPECT_EQ(set.ids, (std::vector<std::string>{"0", "1"}));
  EXPECT_EQ(set.backbone_name, "emb:x.emb");
}

TEST(Emb1, RoundTripIsBitExact) {
  TempDir dir("emb");
  Rng rng = make_rng(3, uint64_t{4});
  std::normal_distribution<float> g(0.0f, 3.0f);
  RowMatrix emb(7, 5);
  RowMatrix logits(7, 4);
  for (Eigen::Index i = 0; i < emb.size(); ++i) emb.data()[i] = g(rng);
  for (Eigen::Index i = 0; i < logits.size(); ++i) logits.data()[i] = g(rng);
  const EmbeddingSet set =
      make_set(emb, {"a", "b", "c", "d", "e", "f", "g#noise@0.5"}, logits);
  save_embedding_file(set, dir / "s.emb");
  const EmbeddingSet back = load_embedding_file(dir / "s.emb");
  EXPECT_TRUE(back == set);
}

TEST(Emb1, MalformedFiles) {
  TempDir dir("emb");
  write_emb1(dir / "nan.emb", 1, 2, 0, {1.0f, std::numeric_limits<float>::quiet_NaN()});
  EXPECT_TRUE(throws_code([&] { load_embedding_file(dir / "nan.emb"); },
                          ErrorCode::kNonFiniteValues));
  write_emb1(dir / "short.emb", 2, 2, 2, {1, 2, 3, 4, 5});
  EXPECT_TRUE(throws_code([&] { load_embedding_file(dir / "short.emb"); },
                          ErrorCode::kTruncated));
  std::ofstream(dir / "magic.emb", std::ios::binary) << "EMB2xxxxxxxxxxxx";
  EXPECT_TRUE(throws_code([&] { load_embedding_file(dir / "magic.emb"); },
                          ErrorCode::kBadMagic));
  write_emb1(dir / "ids.emb", 2, 1, 0, {1, 2});
  std::ofstream(dir / "ids.emb.ids.json") << R"(["only-one"])";
  EXPECT_TRUE(throws_code([&] { load_embedding_file(dir / "ids.emb"); },
                          ErrorCode::kShapeMismatch));
}

}  // namespace
}  // namespace genaudio
