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

#include "pipeline/config.h"

#include <cstdlib>

#include "common/error.h"

namespace zsre::pipeline {
namespace {

using nlohmann::json;

json OptionalPath(const std::optional<std::filesystem::path>& p) {
  return p ? json(p->string()) : json(nullptr);
}

std::optional<std::filesystem::path> ReadOptionalPath(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return std::filesystem::path(j[key].get<std::string>());
}

// Rejects keys that the default configuration does not have.
void CheckKnownKeys(const json& given, const json& known, const std::string& where) {
  if (!given.is_object()) return;
  for (auto it = given.begin(); it != given.end(); ++it) {
    if (where == "llm." && it.key() == "api_key") continue;
    if (!known.contains(it.key())) {
      throw Error(ErrorCode::kConfig, "unknown configuration key '" + where + it.key() + "'");
    }
    if (it.value().is_object() && known[it.key()].is_object() && it.key() != "weights") {
      CheckKnownKeys(it.value(), known[it.key()], where + it.key() + ".");
    }
  }
}

}  // namespace

void RunConfig::Validate() const {
  llm.generation.Validate();
  encoder.Validate();
  if (eval.sizes.empty()) throw Error(ErrorCode::kConfig, "eval sizes must be non-empty");
  for (int n : eval.sizes) {
    if (n < 1) throw Error(ErrorCode::kConfig, "eval sizes must be >= 1");
  }
  if (eval.samples_per_size < 1) throw Error(ErrorCode::kConfig, "samples_per_size must be >= 1");
  try {
    eval.scoring.weights.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, e.what());
  }
}

json RunConfig::ToJson() const {
  json llm_json = llm.generation.ToJson();
  llm_json["provider"] = llm.provider == LlmProvider::kHttp ? "http" : "stub";
  llm_json["base_url"] = llm.base_url;
  llm_json["stub_lexicon"] = OptionalPath(llm.stub_lexicon);
  llm_json["prompt_dir"] = OptionalPath(llm.prompt_dir);

  json encoder_json = encoder.ToJson();
  encoder_json.erase("cache_path");
  encoder_json.erase("seed");

  return {{"dataset",
           {{"path", dataset_path.string()},
            {"format", corpus::DatasetFormatName(dataset.format)},
            {"lenient", dataset.lenient},
            {"relation_names", OptionalPath(dataset.relation_names)}}},
          {"sideinfo_path", OptionalPath(sideinfo_path)},
          {"embedding_cache_path", OptionalPath(embedding_cache_path)},
          {"labels_path", OptionalPath(labels_path)},
          {"breakdowns_path", OptionalPath(breakdowns_path)},
          {"report_path", OptionalPath(report_path)},
          {"llm", llm_json},
          {"encoder", encoder_json},
          {"eval",
           {{"sizes", eval.sizes},
            {"samples_per_size", eval.samples_per_size},
            {"exclude_zero_support", eval.exclude_zero_support}}},
          {"scoring", eval.scoring.ToJson()},
          {"prompts",
           {{"verbatim_appendix_prompts", eval.prompts.verbatim_appendix_prompts},
            {"raw_labels", eval.prompts.raw_labels}}},
          {"score_pairs", score_pairs == corpus::PairMode::kGoldPairs ? "gold_pairs" : "all_ordered_pairs"},
          {"output_dir", output_dir.string()},
          {"seed", seed},
          {"offline", offline},
          {"dry_run", dry_run},
          {"ablation", ablation}};
}

RunConfig RunConfig::FromJson(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kConfig, "configuration must be a JSON object");
  CheckKnownKeys(j, RunConfig{}.ToJson(), "");
  RunConfig c;
  try {
    if (j.contains("dataset")) {
      const json& d = j["dataset"];
      if (d.contains("path") && !d["path"].is_null()) c.dataset_path = d["path"].get<std::string>();
      if (d.contains("format")) c.dataset.format = corpus::ParseDatasetFormat(d["format"].get<std::string>());
      c.dataset.lenient = d.value("lenient", false);
      c.dataset.relation_names = ReadOptionalPath(d, "relation_names");
    }
    c.sideinfo_path = ReadOptionalPath(j, "sideinfo_path");
    c.embedding_cache_path = ReadOptionalPath(j, "embedding_cache_path");
    c.labels_path = ReadOptionalPath(j, "labels_path");
    c.breakdowns_path = ReadOptionalPath(j, "breakdowns_path");
    c.report_path = ReadOptionalPath(j, "report_path");
    if (j.contains("llm")) {
      const json& l = j["llm"];
      c.llm.generation = sideinfo::GenerationConfig::FromJson(l);
      const std::string provider = l.value("provider", "http");
      if (provider == "http") {
        c.llm.provider = LlmProvider::kHttp;
      } else if (provider == "stub") {
        c.llm.provider = LlmProvider::kStub;
      } else {
        throw Error(ErrorCode::kConfig, "unknown llm provider '" + provider + "'");
      }
      c.llm.base_url = l.value("base_url", c.llm.base_url);
      c.llm.api_key = l.value("api_key", "");
      c.llm.stub_lexicon = ReadOptionalPath(l, "stub_lexicon");
      c.llm.prompt_dir = ReadOptionalPath(l, "prompt_dir");
    }
    if (j.contains("encoder")) c.encoder = embedding::EncoderConfig::FromJson(j["encoder"]);
    if (j.contains("eval")) {
      const json& e = j["eval"];
      if (e.contains("sizes")) c.eval.sizes = e["sizes"].get<std::vector<int>>();
      c.eval.samples_per_size = e.value("samples_per_size", c.eval.samples_per_size);
      c.eval.exclude_zero_support = e.value("exclude_zero_support", false);
    }
    if (j.contains("scoring")) c.eval.scoring = scoring::ScoringOptions::FromJson(j["scoring"]);
    if (j.contains("prompts")) {
      c.eval.prompts.verbatim_appendix_prompts = j["prompts"].value("verbatim_appendix_prompts", false);
      c.eval.prompts.raw_labels = j["prompts"].value("raw_labels", false);
    }
    if (j.contains("score_pairs")) {
      const std::string mode = j["score_pairs"].get<std::string>();
      if (mode == "gold_pairs") {
        c.score_pairs = corpus::PairMode::kGoldPairs;
      } else if (mode == "all_ordered_pairs") {
        c.score_pairs = corpus::PairMode::kAllOrderedPairs;
      } else {
        throw Error(ErrorCode::kConfig, "unknown score_pairs '" + mode + "'");
      }
    }
    if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
    c.seed = j.value("seed", c.seed);
    c.offline = j.value("offline", false);
    c.dry_run = j.value("dry_run", false);
    c.ablation = j.value("ablation", false);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("configuration has a value of the wrong type: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfig) throw;
    throw Error(ErrorCode::kConfig, e.what());
  }
  c.eval.master_seed = c.seed;
  c.encoder.seed = c.seed;
  c.encoder.cache_path = c.EmbeddingCachePath();
  return c;
}

RunConfig ResolveConfig(const json& file_layer, const std::map<std::string, std::string>& env,
                        const json& flag_layer) {
  json merged = RunConfig{}.ToJson();
  for (const json* layer : {&file_layer, &flag_layer}) {
    if (!layer->is_null() && !layer->is_object()) throw Error(ErrorCode::kConfig, "configuration layer is not an object");
    if (layer->is_object() && layer->contains("llm") && (*layer)["llm"].is_object() &&
        (*layer)["llm"].contains("api_key")) {
      throw Error(ErrorCode::kConfig, "llm.api_key is read from ZSRE_LLM_API_KEY only");
    }
  }
  if (file_layer.is_object()) {
    CheckKnownKeys(file_layer, merged, "");
    merged.merge_patch(file_layer);
  }
  json env_layer = json::object();
  if (auto it = env.find("ZSRE_LLM_API_KEY"); it != env.end()) env_layer["llm"]["api_key"] = it->second;
  if (auto it = env.find("ZSRE_ENCODER_URL"); it != env.end()) env_layer["encoder"]["base_url"] = it->second;
  merged.merge_patch(env_layer);
  if (flag_layer.is_object()) {
    CheckKnownKeys(flag_layer, merged, "");
    merged.merge_patch(flag_layer);
  }
  RunConfig cfg = RunConfig::FromJson(merged);
  cfg.Validate();
  return cfg;
}

std::map<std::string, std::string> ProcessEnvironment() {
  std::map<std::string, std::string> env;
  for (const char* name : {"ZSRE_LLM_API_KEY", "ZSRE_ENCODER_URL"}) {
    if (const char* v = std::getenv(name); v != nullptr) env[name] = v;
  }
  return env;
}

}  // namespace zsre::pipeline
