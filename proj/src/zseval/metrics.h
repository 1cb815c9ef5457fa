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

#ifndef ZSRE_ZSEVAL_METRICS_H_
#define ZSRE_ZSEVAL_METRICS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace zsre::zseval {

struct PredictionRecord {
  std::string doc_id;
  int head_index = 0;
  int tail_index = 0;
  std::string gold_label;
  std::string predicted_label;
  double final_score = 0;
  int sentence_gap = 0;

  bool correct() const { return gold_label == predicted_label; }

  nlohmann::json ToJson() const;
  static PredictionRecord FromJson(const nlohmann::json& j);
  bool operator==(const PredictionRecord&) const = default;
};

// Seed of sample `k` for unseen-set size `n`:
//   master_seed + 1000003 * n + k   (mod 2^64).
uint64_t RunSeed(uint64_t master_seed, int n, int k);

// Uniform sample of n labels without replacement: a partial Fisher-Yates
// shuffle of `inventory` driven by mt19937_64(seed), drawing bounded
// integers by rejection so the result does not depend on the standard
// library's distributions. Returned in inventory order. Throws kSize when
// n > |inventory| or n < 1.
std::vector<std::string> SampleUnseenLabels(const std::vector<std::string>& inventory, int n, uint64_t seed);

struct LabelStats {
  std::string label;
  size_t true_positives = 0;
  size_t false_positives = 0;
  size_t false_negatives = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;

  size_t support() const { return true_positives + false_negatives; }
  nlohmann::json ToJson() const;
};

// Per-label counts and scores, in labelset order. Throws kLabelOutOfSet.
std::vector<LabelStats> PerLabelStats(std::span<const PredictionRecord> records,
                                      const std::vector<std::string>& labelset);

// Unweighted mean of per-label F1. Labels with neither gold nor predicted
// instances count as F1 = 0 unless `exclude_zero_support`, in which case
// labels without gold instances are left out.
double MacroF1(std::span<const PredictionRecord> records, const std::vector<std::string>& labelset,
               bool exclude_zero_support = false);

double PopulationVariance(std::span<const double> values);

struct GapRow {
  std::string bucket;  // "0".."4", ">=5"
  size_t total = 0;
  size_t correct = 0;
  // Absent when total == 0.
  std::optional<double> correct_pct;
  std::optional<double> incorrect_pct;
};

inline constexpr size_t kNumGapBuckets = 6;
using GapTable = std::array<GapRow, kNumGapBuckets>;

GapTable GapAnalysis(std::span<const PredictionRecord> records);
nlohmann::json GapTableToJson(const GapTable& table);
// Gap | Total | Correct (%) | Incorrect (%)
std::string RenderGapTable(const GapTable& table);

}  // namespace zsre::zseval

#endif  // ZSRE_ZSEVAL_METRICS_H_
