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

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <random>

#include "common/error.h"

namespace zsre::zseval {
namespace {

// Uniform integer in [0, range) from a 64-bit engine, by rejection.
uint64_t Bounded(std::mt19937_64& engine, uint64_t range) {
  const uint64_t threshold = (0 - range) % range;
  for (;;) {
    const uint64_t x = engine();
    if (x >= threshold) return x % range;
  }
}

double SafeRatio(size_t num, size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

nlohmann::json PredictionRecord::ToJson() const {
  return {{"doc_id", doc_id},
          {"head_index", head_index},
          {"tail_index", tail_index},
          {"gold_label", gold_label},
          {"predicted_label", predicted_label},
          {"final_score", final_score},
          {"sentence_gap", sentence_gap}};
}

PredictionRecord PredictionRecord::FromJson(const nlohmann::json& j) {
  PredictionRecord r;
  r.doc_id = j.at("doc_id").get<std::string>();
  r.head_index = j.at("head_index").get<int>();
  r.tail_index = j.at("tail_index").get<int>();
  r.gold_label = j.at("gold_label").get<std::string>();
  r.predicted_label = j.at("predicted_label").get<std::string>();
  r.final_score = j.value("final_score", 0.0);
  r.sentence_gap = j.at("sentence_gap").get<int>();
  return r;
}

uint64_t RunSeed(uint64_t master_seed, int n, int k) {
  return master_seed + 1000003ULL * static_cast<uint64_t>(n) + static_cast<uint64_t>(k);
}

std::vector<std::string> SampleUnseenLabels(const std::vector<std::string>& inventory, int n, uint64_t seed) {
  if (n < 1 || static_cast<size_t>(n) > inventory.size()) {
    throw Error(ErrorCode::kSize, "cannot sample " + std::to_string(n) + " labels from an inventory of " +
                                      std::to_string(inventory.size()));
  }
  std::vector<size_t> idx(inventory.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::mt19937_64 engine(seed);
  for (size_t i = 0; i < static_cast<size_t>(n); ++i) {
    const size_t j = i + static_cast<size_t>(Bounded(engine, idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(static_cast<size_t>(n));
  std::sort(idx.begin(), idx.end());
  std::vector<std::string> out;
  out.reserve(idx.size());
  for (size_t i : idx) out.push_back(inventory[i]);
  return out;
}

nlohmann::json LabelStats::ToJson() const {
  return {{"label", label},         {"tp", true_positives}, {"fp", false_positives},
          {"fn", false_negatives},  {"precision", precision}, {"recall", recall},
          {"f1", f1},               {"support", support()}};
}

std::vector<LabelStats> PerLabelStats(std::span<const PredictionRecord> records,
                                      const std::vector<std::string>& labelset) {
  std::map<std::string, size_t> index;
  std::vector<LabelStats> stats(labelset.size());
  for (size_t i = 0; i < labelset.size(); ++i) {
    index[labelset[i]] = i;
    stats[i].label = labelset[i];
  }
  auto lookup = [&](const std::string& label) -> LabelStats& {
    auto it = index.find(label);
    if (it == index.end()) throw Error(ErrorCode::kLabelOutOfSet, "label '" + label + "' not in the label set");
    return stats[it->second];
  };
  for (const auto& r : records) {
    LabelStats& gold = lookup(r.gold_label);
    LabelStats& pred = lookup(r.predicted_label);
    if (r.correct()) {
      ++gold.true_positives;
    } else {
      ++gold.false_negatives;
      ++pred.false_positives;
    }
  }
  for (auto& s : stats) {
    s.precision = SafeRatio(s.true_positives, s.true_positives + s.false_positives);
    s.recall = SafeRatio(s.true_positives, s.true_positives + s.false_negatives);
    s.f1 = SafeRatio(2 * s.true_positives, 2 * s.true_positives + s.false_positives + s.false_negatives);
  }
  return stats;
}

double MacroF1(std::span<const PredictionRecord> records, const std::vector<std::string>& labelset,
               bool exclude_zero_support) {
  const auto stats = PerLabelStats(records, labelset);
  double sum = 0;
  size_t count = 0;
  for (const auto& s : stats) {
    if (exclude_zero_support && s.support() == 0) continue;
    sum += s.f1;
    ++count;
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

double PopulationVariance(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double mean = 0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double sq = 0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return sq / static_cast<double>(values.size());
}

GapTable GapAnalysis(std::span<const PredictionRecord> records) {
  GapTable table;
  for (size_t b = 0; b < kNumGapBuckets; ++b) {
    table[b].bucket = b + 1 < kNumGapBuckets ? std::to_string(b) : ">=5";
  }
  for (const auto& r : records) {
    const size_t b = static_cast<size_t>(std::clamp(r.sentence_gap, 0, static_cast<int>(kNumGapBuckets) - 1));
    ++table[b].total;
    if (r.correct()) ++table[b].correct;
  }
  for (auto& row : table) {
    if (row.total == 0) continue;
    row.correct_pct = 100.0 * static_cast<double>(row.correct) / static_cast<double>(row.total);
    row.incorrect_pct = 100.0 * static_cast<double>(row.total - row.correct) / static_cast<double>(row.total);
  }
  return table;
}

nlohmann::json GapTableToJson(const GapTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table) {
    rows.push_back({{"gap", row.bucket},
                    {"total", row.total},
                    {"correct", row.correct},
                    {"correct_pct", row.correct_pct ? nlohmann::json(*row.correct_pct) : nlohmann::json(nullptr)},
                    {"incorrect_pct", row.incorrect_pct ? nlohmann::json(*row.incorrect_pct) : nlohmann::json(nullptr)}});
  }
  return rows;
}

std::string RenderGapTable(const GapTable& table) {
  std::string out = fmt::format("{:<6} {:>8} {:>12} {:>14}\n", "Gap", "Total", "Correct (%)", "Incorrect (%)");
  for (const auto& row : table) {
    if (row.total == 0) {
      out += fmt::format("{:<6} {:>8} {:>12} {:>14}\n", row.bucket, 0, "-", "-");
    } else {
      out += fmt::format("{:<6} {:>8} {:>12.2f} {:>14.2f}\n", row.bucket, row.total, *row.correct_pct,
                         *row.incorrect_pct);
    }
  }
  return out;
}

}  // namespace zsre::zseval
