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

#ifndef ZSRE_PIPELINE_CONFIG_H_
#define ZSRE_PIPELINE_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "corpus/corpus.h"
#include "embedding/encoder.h"
#include "json.hpp"
#include "sideinfo/generator.h"
#include "zseval/eval.h"

namespace zsre::pipeline {

inline constexpr char kVersion[] = "0.1.0";

enum class LlmProvider { kHttp, kStub };

struct LlmConfig {
  LlmProvider provider = LlmProvider::kHttp;
  std::string base_url = "https://api.openai.com";
  // Taken from ZSRE_LLM_API_KEY; never serialized.
  std::string api_key;
  std::optional<std::filesystem::path> stub_lexicon;
  std::optional<std::filesystem::path> prompt_dir;
  sideinfo::GenerationConfig generation;
};

// Everything one command needs. Serialized form (UTF-8 JSON):
//   {"dataset": {"path", "format", "lenient", "relation_names"},
//    "sideinfo_path", "embedding_cache_path", "labels_path",
//    "breakdowns_path", "report_path",
//    "llm": {"provider", "base_url", "stub_lexicon", "prompt_dir",
//            <GenerationConfig fields>},
//    "encoder": {<EncoderConfig fields except cache_path and seed>},
//    "eval": {"sizes", "samples_per_size", "exclude_zero_support"},
//    "scoring": {"mode", "weights", "role_agg", "confidence_excludes_context"},
//    "prompts": {"verbatim_appendix_prompts", "raw_labels"},
//    "score_pairs", "output_dir", "seed", "offline", "dry_run", "ablation"}
// `seed` is the only source of randomness: it becomes both the evaluation
// master seed and the mock encoder seed.
struct RunConfig {
  std::filesystem::path dataset_path;
  corpus::LoadOptions dataset;
  std::optional<std::filesystem::path> sideinfo_path;
  std::optional<std::filesystem::path> embedding_cache_path;
  std::optional<std::filesystem::path> labels_path;
  // Default to <output_dir>/breakdowns.jsonl and <output_dir>/report.json.
  // The eval stage writes its other files next to the report.
  std::optional<std::filesystem::path> breakdowns_path;
  std::optional<std::filesystem::path> report_path;
  LlmConfig llm;
  embedding::EncoderConfig encoder;
  zseval::EvalConfig eval;
  corpus::PairMode score_pairs = corpus::PairMode::kGoldPairs;
  std::filesystem::path output_dir = "zsre_out";
  uint64_t seed = 0;
  bool offline = false;
  bool dry_run = false;
  // The eval stage also evaluates every scoring mode.
  bool ablation = false;

  std::filesystem::path SideInfoPath() const { return sideinfo_path.value_or(output_dir / "sideinfo.jsonl"); }
  std::filesystem::path EmbeddingCachePath() const {
    return embedding_cache_path.value_or(output_dir / "embeddings.jsonl");
  }
  std::filesystem::path BreakdownsPath() const { return breakdowns_path.value_or(output_dir / "breakdowns.jsonl"); }
  std::filesystem::path ReportPath() const { return report_path.value_or(output_dir / "report.json"); }

  // Throws kConfig for invalid values.
  void Validate() const;
  nlohmann::json ToJson() const;
  // Missing keys keep their defaults; unknown keys are a kConfig error.
  static RunConfig FromJson(const nlohmann::json& j);
};

// Precedence: flags > environment > config file > defaults. Each layer is a
// partial JSON document in the RunConfig schema, applied as a JSON merge
// patch. Recognized environment variables: ZSRE_LLM_API_KEY (llm api key),
// ZSRE_ENCODER_URL (encoder.base_url).
RunConfig ResolveConfig(const nlohmann::json& file_layer, const std::map<std::string, std::string>& env,
                        const nlohmann::json& flag_layer);

// Reads ZSRE_* variables from the process environment.
std::map<std::string, std::string> ProcessEnvironment();

}  // namespace zsre::pipeline

#endif  // ZSRE_PIPELINE_CONFIG_H_
