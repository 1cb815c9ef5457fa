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

#ifndef ZSRE_PIPELINE_SESSION_H_
#define ZSRE_PIPELINE_SESSION_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "corpus/corpus.h"
#include "embedding/encoder.h"
#include "json.hpp"
#include "pipeline/config.h"
#include "sideinfo/chat_client.h"
#include "sideinfo/store.h"
#include "zseval/eval.h"

namespace zsre::pipeline {

enum class Stage { kValidate, kSideInfo, kEmbed, kScore, kEval };

std::string StageName(Stage stage);
// Comma-separated names, returned in dependency order without duplicates.
// Throws kConfig for an unknown name.
std::vector<Stage> ParseStages(const std::string& csv);

struct StageReport {
  Stage stage;
  nlohmann::json summary;
  double millis = 0;
};

struct RunSummary {
  std::vector<StageReport> stages;
  nlohmann::json manifest;
};

struct ExplainRow {
  scoring::ScoreBreakdown breakdown;
  bool winner = false;
};

struct Explanation {
  std::string doc_id;
  int head_index = 0;
  int tail_index = 0;
  std::string head_surface;
  std::string tail_surface;
  std::string mode;
  // Sorted by mode score, highest first; ties keep candidate order.
  std::vector<ExplainRow> rows;

  std::string RenderText() const;
  nlohmann::json ToJson() const;
};

// One command's worth of pipeline state. Inputs are loaded lazily and
// shared between stages. Injected clients replace the configured providers
// (tests and C API callbacks); offline mode still wraps them so that no
// remote call is made.
class Session {
 public:
  explicit Session(RunConfig cfg, std::shared_ptr<sideinfo::ChatClient> chat = nullptr,
                   std::shared_ptr<embedding::Encoder> encoder = nullptr);

  const RunConfig& config() const { return cfg_; }

  // Runs `stages` in dependency order and writes <output_dir>/manifest.json
  // (also on failure, with status "failed"). A failing stage is reported as
  // StageError(stage, cause).
  RunSummary Run(const std::vector<Stage>& stages, const std::string& command = "run");

  nlohmann::json ValidateStage();
  nlohmann::json SideInfoStage();
  nlohmann::json EmbedStage();
  nlohmann::json ScoreStage();
  nlohmann::json EvalStage(bool ablation = false);

  Explanation Explain(const std::string& doc_id, int head_index, int tail_index,
                      const std::optional<std::vector<std::string>>& labels = std::nullopt);

  // Calls that left the process (counted only for remote clients).
  uint64_t remote_chat_calls() const;
  uint64_t remote_encoder_calls() const;

 private:
  const corpus::Dataset& dataset();
  sideinfo::SideInfoStore& store();
  embedding::Embedder& embedder();
  std::vector<std::string> CandidateLabels();
  nlohmann::json InputHashes() const;
  std::filesystem::path Out(const std::string& name) const { return cfg_.output_dir / name; }
  void Write(const std::filesystem::path& path, const std::string& contents);

  RunConfig cfg_;
  std::shared_ptr<sideinfo::CountingChatClient> chat_;
  std::shared_ptr<embedding::CountingEncoder> encoder_;
  std::optional<corpus::Dataset> dataset_;
  std::optional<sideinfo::SideInfoStore> store_;
  std::unique_ptr<embedding::Embedder> embedder_;
  sideinfo::PromptSet prompts_;
  bool sideinfo_stage_ran_ = false;
  std::vector<std::string> outputs_;
};

// Gap table of a predictions JSONL file (as written by the eval stage),
// optionally restricted to one unseen-set size.
zseval::GapTable GapFromPredictions(const std::filesystem::path& path, std::optional<int> size = std::nullopt);

// One label per line (blank lines and '#' comments skipped), or a JSON array.
std::vector<std::string> LoadLabelFile(const std::filesystem::path& path);

}  // namespace zsre::pipeline

#endif  // ZSRE_PIPELINE_SESSION_H_
