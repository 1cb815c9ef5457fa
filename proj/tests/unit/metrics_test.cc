// Copyright 2026 The zsre Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "zseval/metrics.h"

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "common/error.h"
#include "test_util.h"

namespace zsre::zseval {
namespace {

using testing::Golden;

PredictionRecord Rec(const std::string& gold, const std::string& pred, int gap = 0) {
  PredictionRecord r;
  r.doc_id = "d";
  r.gold_label = gold;
  r.predicted_label = pred;
  r.sentence_gap = gap;
  return r;
}

std::vector<std::string> Inventory(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back((i < 10 ? "L0" : "L") + std::to_string(i));
  return out;
}

TEST(Mt19937Test, MatchesOracle) {
  std::mt19937_64 rng(5489);
  const auto expected = Golden()["fixtures"]["mt19937_64_seed5489_first3"].get<std::vector<uint64_t>>();
  for (uint64_t e : expected) EXPECT_EQ(rng(), e);
}

TEST(RunSeedTest, Formula) {
  EXPECT_EQ(RunSeed(13, 5, 2), 5000030u);
  EXPECT_EQ(RunSeed(13, 5, 2), Golden()["fixtures"]["run_seed_13_5_2"].get<uint64_t>());
  EXPECT_EQ(RunSeed(0, 0, 0), 0u);
  EXPECT_EQ(RunSeed(UINT64_MAX, 0, 1), 0u);  // wraps
  std::set<uint64_t> seen;
  for (int n : {5, 10, 15}) {
    for (int k = 0; k < 3; ++k) seen.insert(RunSeed(7, n, k));
  }
  EXPECT_EQ(seen.size(), 9u);
}

TEST(SampleUnseenLabelsTest, OracleExample) {
  const auto sample = SampleUnseenLabels(Inventory(16), 5, 42);
  EXPECT_EQ(sample, Golden()["fixtures"]["sample_16_5_seed42"].get<std::vector<std::string>>());
}

TEST(SampleUnseenLabelsTest, SortedDistinctDeterministic) {
  const auto inv = Inventory(16);
  for (uint64_t seed = 0; seed < 200; ++seed) {
    const auto s = SampleUnseenLabels(inv, 7, seed);
    EXPECT_EQ(s, SampleUnseenLabels(inv, 7, seed));
    EXPECT_EQ(s.size(), 7u);
    EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
    EXPECT_EQ(std::set<std::string>(s.begin(), s.end()).size(), 7u);
  }
  EXPECT_EQ(SampleUnseenLabels(inv, 16, 3), inv);
}

TEST(SampleUnseenLabelsTest, SizeErrors) {
  const auto inv = Inventory(4);
  for (int n : {0, -1, 5}) {
    try {
      SampleUnseenLabels(inv, n, 1);
      FAIL() << n;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kSize);
    }
  }
}

TEST(SampleUnseenLabelsTest, RoughlyUniformOverSeeds) {
  const auto inv = Inventory(16);
  std::map<std::string, int> counts;
  constexpr int kSeeds = 10000;
  for (uint64_t seed = 0; seed < kSeeds; ++seed) {
    for (const auto& l : SampleUnseenLabels(inv, 5, RunSeed(seed, 5, 0))) ++counts[l];
  }
  // Expected 3125 per label, standard deviation about 46.
  for (const auto& l : inv) {
    EXPECT_NEAR(counts[l], kSeeds * 5 / 16.0, 250) << l;
  }
}

TEST(MacroF1Test, Examples) {
  const std::vector<PredictionRecord> perfect = {Rec("A", "A"), Rec("B", "B")};
  EXPECT_DOUBLE_EQ(MacroF1(perfect, {"A", "B"}), 1.0);
  const std::vector<PredictionRecord> mixed = {Rec("A", "A"), Rec("A", "B"), Rec("B", "B")};
  EXPECT_NEAR(MacroF1(mixed, {"A", "B"}), Golden()["fixtures"]["macro_f1_AAB_ABB"].get<double>(), 1e-12);
  EXPECT_NEAR(MacroF1(mixed, {"A", "B"}), 2.0 / 3.0, 1e-12);
  // A label that never occurs drags the mean down unless excluded.
  EXPECT_DOUBLE_EQ(MacroF1(perfect, {"A", "B", "C"}), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(MacroF1(perfect, {"A", "B", "C"}, true), 1.0);
  EXPECT_DOUBLE_EQ(MacroF1({}, {"A"}), 0.0);
}

TEST(MacroF1Test, LabelOutOfSet) {
  const std::vector<PredictionRecord> recs = {Rec("A", "Z")};
  try {
    MacroF1(recs, {"A", "B"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLabelOutOfSet);
  }
}

// Reference macro F1 from an explicit confusion matrix.
double ConfusionMacroF1(const std::vector<PredictionRecord>& recs, const std::vector<std::string>& labels) {
  const size_t n = labels.size();
  std::map<std::string, size_t> idx;
  for (size_t i = 0; i < n; ++i) idx[labels[i]] = i;
  std::vector<std::vector<int>> m(n, std::vector<int>(n, 0));
  for (const auto& r : recs) ++m[idx[r.gold_label]][idx[r.predicted_label]];
  double sum = 0;
  for (size_t i = 0; i < n; ++i) {
    int tp = m[i][i], col = 0, row = 0;
    for (size_t j = 0; j < n; ++j) {
      col += m[j][i];
      row += m[i][j];
    }
    const double p = col ? static_cast<double>(tp) / col : 0;
    const double r = row ? static_cast<double>(tp) / row : 0;
    sum += (p + r) > 0 ? 2 * p * r / (p + r) : 0;
  }
  return sum / static_cast<double>(n);
}

TEST(MacroF1Test, AgreesWithConfusionMatrixReference) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 6);
    const auto labels = Inventory(n);
    std::vector<PredictionRecord> recs;
    const int m = static_cast<int>(rng() % 30);
    for (int i = 0; i < m; ++i) recs.push_back(Rec(labels[rng() % n], labels[rng() % n]));
    const double f1 = MacroF1(recs, labels);
    EXPECT_NEAR(f1, ConfusionMacroF1(recs, labels), 1e-12);
    EXPECT_GE(f1, 0.0);
    EXPECT_LE(f1, 1.0);
  }
}

TEST(PerLabelStatsTest, Counts) {
  const std::vector<PredictionRecord> recs = {Rec("A", "A"), Rec("A", "B"), Rec("B", "B"), Rec("B", "B")};
  const auto stats = PerLabelStats(recs, {"A", "B"});
  EXPECT_EQ(stats[0].true_positives, 1u);
  EXPECT_EQ(stats[0].false_negatives, 1u);
  EXPECT_EQ(stats[0].false_positives, 0u);
  EXPECT_EQ(stats[1].false_positives, 1u);
  EXPECT_EQ(stats[1].support(), 2u);
  EXPECT_DOUBLE_EQ(stats[1].precision, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(stats[1].recall, 1.0);
}

TEST(PopulationVarianceTest, Examples) {
  EXPECT_DOUBLE_EQ(PopulationVariance(std::vector<double>{0.5}), 0.0);
  EXPECT_DOUBLE_EQ(PopulationVariance(std::vector<double>{1, 3}), 1.0);
  EXPECT_NEAR(PopulationVariance(std::vector<double>{0.2, 0.4, 0.6}), 0.08 / 3, 1e-15);
  EXPECT_DOUBLE_EQ(PopulationVariance(std::vector<double>{}), 0.0);
}

TEST(GapAnalysisTest, BucketsAndPercentages) {
  std::vector<PredictionRecord> recs = {Rec("A", "A", 0), Rec("A", "B", 0), Rec("A", "A", 0), Rec("A", "A", 2),
                                        Rec("A", "B", 5), Rec("A", "A", 9)};
  const auto table = GapAnalysis(recs);
  EXPECT_EQ(table[0].bucket, "0");
  EXPECT_EQ(table[0].total, 3u);
  EXPECT_EQ(table[0].correct, 2u);
  EXPECT_NEAR(*table[0].correct_pct, 200.0 / 3, 1e-9);
  EXPECT_NEAR(*table[0].incorrect_pct, 100.0 / 3, 1e-9);
  EXPECT_FALSE(table[1].correct_pct.has_value());
  EXPECT_EQ(table[2].total, 1u);
  EXPECT_EQ(table[5].bucket, ">=5");
  EXPECT_EQ(table[5].total, 2u);
  EXPECT_DOUBLE_EQ(*table[5].correct_pct, 50.0);
  size_t total = 0;
  for (const auto& row : table) total += row.total;
  EXPECT_EQ(total, recs.size());

  const auto j = GapTableToJson(table);
  EXPECT_TRUE(j[1]["correct_pct"].is_null());
  const std::string text = RenderGapTable(table);
  EXPECT_NE(text.find("Gap"), std::string::npos);
  EXPECT_NE(text.find("Correct (%)"), std::string::npos);
  EXPECT_NE(text.find("66.67"), std::string::npos);
  EXPECT_NE(text.find(">=5"), std::string::npos);
}

TEST(PredictionRecordTest, JsonRoundTrip) {
  auto r = Rec("employer", "author", 3);
  r.head_index = 2;
  r.tail_index = 1;
  r.final_score = 0.125;
  EXPECT_EQ(PredictionRecord::FromJson(r.ToJson()), r);
}

}  // namespace
}  // namespace zsre::zseval
