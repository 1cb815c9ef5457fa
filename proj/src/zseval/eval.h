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

#ifndef ZSRE_ZSEVAL_EVAL_H_
#define ZSRE_ZSEVAL_EVAL_H_

#include <cstdint>
#include <string>
#include <vector>

#include "corpus/corpus.h"
#include "embedding/encoder.h"
#include "embedding/prompts.h"
#include "json.hpp"
#include "scoring/scoring.h"
#include "sideinfo/store.h"
#include "zseval/metrics.h"

namespace zsre::zseval {

inline constexpr int kReportSchemaVersion = 1;

struct EvalConfig {
  std::vector<int> sizes = {5, 10, 15};
  int samples_per_size = 3;
  uint64_t master_seed = 0;
  scoring::ScoringOptions scoring;
  embedding::PromptOptions prompts;
  bool exclude_zero_support = false;

  // Throws kConfig, or kSize when a size exceeds the inventory.
  void Validate(size_t inventory_size) const;
  nlohmann::json ToJson() const;
  static EvalConfig FromJson(const nlohmann::json& j);
};

struct RunResult {
  int size = 0;
  int sample = 0;
  uint64_t seed = 0;
  std::vector<std::string> labels;
  double macro_f1 = 0;
  // Share of sampled labels with at least one correct prediction.
  double label_hit_rate = 0;
  std::vector<LabelStats> per_label;
  std::vector<PredictionRecord> records;

  nlohmann::json ToJson() const;
};

struct SizeSummary {
  int size = 0;
  std::vector<double> f1s;
  double mean_f1 = 0;
  double variance = 0;  // population variance of f1s
  GapTable gap_table;   // over every record of every run of this size

  nlohmann::json ToJson() const;
};

struct EvalReport {
  nlohmann::json config;
  std::vector<RunResult> runs;
  std::vector<SizeSummary> sizes;

  // Deterministic: no timestamps, stable ordering. Records are not included.
  nlohmann::json ToJson() const;
  // One JSON object per record, tagged with its run's size and sample.
  std::string RecordsJsonl() const;
  // Macro F1 table (percent, mean ± variance of the percent values) followed
  // by one sentence-gap table per size.
  std::string RenderText() const;
};

// For each size n and sample k: draw the unseen set, score every gold pair
// having a gold label in it against that set only, and compute macro F1.
// Throws kCoverage when side information or (offline) embeddings are
// missing.
EvalReport RunZeroShotEval(const corpus::Dataset& dataset, const sideinfo::SideInfoStore& store,
                           embedding::Embedder& embedder, const EvalConfig& cfg);

// Macro F1 mean ± variance for every mode (rows) and size (columns).
std::string RenderAblationTable(const std::vector<std::pair<std::string, EvalReport>>& reports);

}  // namespace zsre::zseval

#endif  // ZSRE_ZSEVAL_EVAL_H_
