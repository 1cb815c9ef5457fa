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

// zsre command-line tool. Everything goes through the C API in zsre.h.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "zsre/zsre.h"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitStage = 3;

// Thrown for problems found before any stage runs.
struct ConfigProblem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Owned {
  char* p = nullptr;
  ~Owned() { zsre_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct GlobalFlags {
  std::string config_path;
  std::optional<uint64_t> seed;
  bool offline = false;
  bool dry_run = false;
  bool verbatim = false;
  bool raw_labels = false;
  std::string out_dir;
  std::string embeddings;
  std::string encoder;
  std::string format;
  bool lenient = false;
  bool quiet = false;
};

int ExitCodeFor(zsre_status st) {
  switch (st) {
    case ZSRE_OK: return kExitOk;
    case ZSRE_CONFIG:
    case ZSRE_INVALID_ARGUMENT: return kExitConfig;
    default: return kExitStage;
  }
}

int Report(zsre_status st) {
  if (st == ZSRE_OK) return kExitOk;
  if (st == ZSRE_STAGE) {
    std::fprintf(stderr, "error: %s [%s in stage %s]\n", zsre_last_error(), zsre_status_name(zsre_last_error_cause()),
                 zsre_last_error_stage());
  } else {
    std::fprintf(stderr, "error: %s [%s]\n", zsre_last_error(), zsre_status_name(st));
  }
  return ExitCodeFor(st);
}

void RequireFile(const std::string& path, const char* what) {
  if (!path.empty() && !fs::exists(path)) throw ConfigProblem(std::string(what) + " not found: " + path);
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigProblem("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --weights accepts inline JSON or a path to a JSON file.
json ParseWeights(const std::string& arg) {
  const std::string text = fs::exists(arg) ? Slurp(arg) : arg;
  try {
    json j = json::parse(text);
    if (j.is_array()) {
      static const char* kNames[] = {"desc", "head_hyp", "tail_hyp", "head_type", "tail_type", "role", "context"};
      if (j.size() != 7) throw ConfigProblem("--weights array must have 7 entries");
      json o = json::object();
      for (size_t i = 0; i < 7; ++i) o[kNames[i]] = j[i];
      return o;
    }
    if (!j.is_object()) throw ConfigProblem("--weights must be a JSON object or array");
    return j;
  } catch (const json::exception& e) {
    throw ConfigProblem(std::string("--weights is neither a file nor valid JSON: ") + e.what());
  }
}

class Command {
 public:
  explicit Command(const GlobalFlags& g) : g_(g) {}

  json& flags() { return flags_; }

  void Set(const json::json_pointer& ptr, const json& value) { flags_[ptr] = value; }

  void SetPathIf(const std::string& key, const std::string& path, const char* what, bool must_exist) {
    if (path.empty()) return;
    if (must_exist) RequireFile(path, what);
    flags_[key] = path;
  }

  // Output files land next to `out` unless --out-dir is given.
  void OutputNextTo(const std::string& out) {
    if (!g_.out_dir.empty() || out.empty()) return;
    const fs::path parent = fs::path(out).parent_path();
    flags_["output_dir"] = parent.empty() ? "." : parent.string();
  }

  int Run(const std::string& stages, const std::string& command) {
    Finish();
    zsre_session* s = nullptr;
    zsre_status st = zsre_session_create(file_.c_str(), flags_.dump().c_str(), nullptr, &s);
    if (st != ZSRE_OK) return Report(st);
    Owned out;
    st = zsre_session_run(s, stages.c_str(), command.c_str(), &out.p);
    const int code = Report(st);
    if (code == kExitOk && !g_.quiet) Summarize(out.str());
    zsre_session_destroy(s);
    return code;
  }

  zsre_session* Open() {
    Finish();
    zsre_session* s = nullptr;
    const zsre_status st = zsre_session_create(file_.c_str(), flags_.dump().c_str(), nullptr, &s);
    if (st != ZSRE_OK) {
      last_status_ = st;
      return nullptr;
    }
    return s;
  }
  zsre_status last_status() const { return last_status_; }

 private:
  void Finish() {
    if (!g_.config_path.empty()) {
      RequireFile(g_.config_path, "config file");
      file_ = Slurp(g_.config_path);
    }
    if (g_.seed) flags_["seed"] = *g_.seed;
    if (g_.offline) flags_["offline"] = true;
    if (g_.dry_run) flags_["dry_run"] = true;
    if (g_.verbatim) flags_["prompts"]["verbatim_appendix_prompts"] = true;
    if (g_.raw_labels) flags_["prompts"]["raw_labels"] = true;
    if (!g_.out_dir.empty()) flags_["output_dir"] = g_.out_dir;
    if (!g_.embeddings.empty()) flags_["embedding_cache_path"] = g_.embeddings;
    if (!g_.encoder.empty()) flags_["encoder"]["provider"] = g_.encoder;
    if (!g_.format.empty()) flags_["dataset"]["format"] = g_.format;
    if (g_.lenient) flags_["dataset"]["lenient"] = true;
  }

  static void Summarize(const std::string& out) {
    json j = json::parse(out, nullptr, false);
    if (j.is_discarded()) return;
    for (const auto& stage : j["stages"]) {
      const json& summary = stage["summary"];
      // Rendered tables are more useful on a terminal than the summary.
      bool printed = false;
      for (const char* key : {"text", "ablation"}) {
        if (summary.contains(key) && summary[key].is_string()) {
          std::ifstream in(summary[key].get<std::string>());
          if (in) {
            if (printed) std::cout << "\n";
            std::cout << in.rdbuf();
            printed = true;
          }
        }
      }
      if (!printed) std::cout << stage["stage"].get<std::string>() << ": " << summary.dump() << "\n";
    }
  }

  const GlobalFlags& g_;
  json flags_ = json::object();
  std::string file_;
  zsre_status last_status_ = ZSRE_OK;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-shot document-level relation extraction with side information"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("zsre ") + zsre_version());

  GlobalFlags g;
  app.add_option("--config", g.config_path, "JSON configuration file");
  app.add_option("--seed", g.seed, "Master seed for sampling and the mock encoder");
  app.add_flag("--offline", g.offline, "Forbid network access; fail on cache misses");
  app.add_flag("--dry-run", g.dry_run, "Plan only: no writes, no network calls");
  app.add_flag("--verbatim-appendix-prompts", g.verbatim, "Render the tail role prompt with \"a subject\"");
  app.add_flag("--raw-labels", g.raw_labels, "Embed relation labels without normalization");
  app.add_option("--out-dir", g.out_dir, "Directory for outputs and the run manifest");
  app.add_option("--embeddings", g.embeddings, "Embedding cache file");
  app.add_option("--encoder", g.encoder, "Encoder provider")->check(CLI::IsMember({"deterministic_mock", "remote_http"}));
  app.add_option("--format", g.format, "Dataset format")->check(CLI::IsMember({"docred", "men"}));
  app.add_flag("--lenient", g.lenient, "Skip invalid documents instead of failing");
  app.add_flag("-q,--quiet", g.quiet, "Print nothing on success");
  app.fallthrough();

  // corpus validate
  auto* corpus = app.add_subcommand("corpus", "Dataset utilities")->require_subcommand(1)->fallthrough();
  auto* validate = corpus->add_subcommand("validate", "Validate a dataset file and print a JSON report");
  std::string v_dataset, v_out;
  validate->add_option("--dataset", v_dataset, "Dataset file")->required();
  validate->add_option("--out", v_out, "Also write the report here");

  // sideinfo build
  auto* sideinfo = app.add_subcommand("sideinfo", "Side-information generation")->require_subcommand(1)->fallthrough();
  auto* build = sideinfo->add_subcommand("build", "Generate descriptions and hypernyms for every entity");
  std::string b_dataset, b_out, b_model, b_provider, b_lexicon, b_prompts, b_base_url;
  std::optional<int> b_parallelism;
  build->add_option("--dataset", b_dataset, "Dataset file")->required();
  build->add_option("--out", b_out, "Side-information JSONL (appended, resumable)")->required();
  build->add_option("--model", b_model, "Chat model id");
  build->add_option("--parallelism", b_parallelism, "Concurrent requests")->check(CLI::PositiveNumber);
  build->add_option("--llm-provider", b_provider, "http or stub")->check(CLI::IsMember({"http", "stub"}));
  build->add_option("--stub-lexicon", b_lexicon, "JSON surface -> hypernym map for the stub provider");
  build->add_option("--prompt-dir", b_prompts, "Directory with description.txt and hypernym.txt");
  build->add_option("--base-url", b_base_url, "Chat completion service base URL");

  // embed warm
  auto* embed = app.add_subcommand("embed", "Embedding cache")->require_subcommand(1)->fallthrough();
  auto* warm = embed->add_subcommand("warm", "Embed every feature text and label into the cache");
  std::string w_sideinfo, w_labels, w_out, w_dataset;
  warm->add_option("--sideinfo", w_sideinfo, "Side-information JSONL")->required();
  warm->add_option("--labels", w_labels, "Label file (one per line or a JSON array)");
  warm->add_option("--out", w_out, "Embedding cache file")->required();
  warm->add_option("--dataset", w_dataset, "Restrict to this dataset's pairs and labels");

  // score
  auto* score = app.add_subcommand("score", "Score entity pairs against candidate labels");
  std::string s_dataset, s_sideinfo, s_labels, s_mode, s_weights, s_out;
  bool s_all_pairs = false;
  score->add_option("--dataset", s_dataset, "Dataset file")->required();
  score->add_option("--sideinfo", s_sideinfo, "Side-information JSONL")->required();
  score->add_option("--labels", s_labels, "Candidate labels (default: dataset inventory)");
  score->add_option("--mode", s_mode, "Scoring mode")
      ->check(CLI::IsMember({"desc_only", "desc_hypernym", "desc_type", "desc_hyp_type", "full_weighted"}));
  score->add_option("--weights", s_weights, "Weights as JSON (object or 7-array) or a JSON file");
  score->add_option("--out", s_out, "Breakdowns JSONL")->required();
  score->add_flag("--all-pairs", s_all_pairs, "Score all ordered entity pairs instead of gold pairs");

  // eval run
  auto* eval = app.add_subcommand("eval", "Zero-shot evaluation")->require_subcommand(1)->fallthrough();
  auto* eval_run = eval->add_subcommand("run", "Sample unseen label sets and report macro F1");
  std::string e_dataset, e_sideinfo, e_out;
  bool e_ablation = false;
  eval_run->add_option("--dataset", e_dataset, "Dataset file")->required();
  eval_run->add_option("--sideinfo", e_sideinfo, "Side-information JSONL")->required();
  eval_run->add_option("--out", e_out, "Report JSON")->required();
  eval_run->add_flag("--ablation", e_ablation, "Also evaluate every scoring mode");

  // gap
  auto* gap = app.add_subcommand("gap", "Sentence-gap table from eval predictions");
  std::string g_predictions;
  int g_size = -1;
  bool g_json = false;
  gap->add_option("--predictions", g_predictions, "Predictions JSONL from eval run")->required();
  gap->add_option("--size", g_size, "Only records of this unseen-set size");
  gap->add_flag("--json", g_json, "JSON instead of a table");

  // explain
  auto* explain = app.add_subcommand("explain", "Per-label score breakdown for one entity pair");
  std::string x_dataset, x_sideinfo, x_doc, x_labels;
  int x_head = 0, x_tail = 0;
  bool x_json = false;
  explain->add_option("--dataset", x_dataset, "Dataset file")->required();
  explain->add_option("--sideinfo", x_sideinfo, "Side-information JSONL")->required();
  explain->add_option("--doc", x_doc, "Document id")->required();
  explain->add_option("--head", x_head, "Head entity index")->required();
  explain->add_option("--tail", x_tail, "Tail entity index")->required();
  explain->add_option("--labels", x_labels, "Candidate labels (default: dataset inventory)");
  explain->add_flag("--json", x_json, "JSON instead of a table");

  // run
  auto* run = app.add_subcommand("run", "Run pipeline stages from a configuration");
  std::string r_stages = "validate,sideinfo,embed,score,eval";
  run->add_option("--stages", r_stages, "Comma-separated stages")->capture_default_str();

  // config
  auto* config = app.add_subcommand("config", "Print the effective configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    Command cmd(g);
    if (validate->parsed()) {
      RequireFile(v_dataset, "dataset");
      Owned report;
      const zsre_status st = zsre_dataset_validate(v_dataset.c_str(), g.format.empty() ? nullptr : g.format.c_str(),
                                                   &report.p);
      if (st != ZSRE_OK) return Report(st);
      std::cout << report.str() << "\n";
      if (!v_out.empty() && !g.dry_run) {
        std::ofstream(v_out, std::ios::binary) << report.str() << "\n";
      }
      const bool ok = json::parse(report.str()).value("valid", false);
      return ok || g.lenient ? kExitOk : kExitStage;
    }
    if (build->parsed()) {
      cmd.SetPathIf("sideinfo_path", b_out, "", false);
      RequireFile(b_dataset, "dataset");
      cmd.Set("/dataset/path"_json_pointer, b_dataset);
      if (!b_model.empty()) cmd.Set("/llm/model_id"_json_pointer, b_model);
      if (b_parallelism) cmd.Set("/llm/parallelism"_json_pointer, *b_parallelism);
      if (!b_provider.empty()) cmd.Set("/llm/provider"_json_pointer, b_provider);
      if (!b_lexicon.empty()) {
        RequireFile(b_lexicon, "stub lexicon");
        cmd.Set("/llm/stub_lexicon"_json_pointer, b_lexicon);
      }
      if (!b_prompts.empty()) {
        RequireFile(b_prompts, "prompt directory");
        cmd.Set("/llm/prompt_dir"_json_pointer, b_prompts);
      }
      if (!b_base_url.empty()) cmd.Set("/llm/base_url"_json_pointer, b_base_url);
      cmd.OutputNextTo(b_out);
      return cmd.Run("sideinfo", "sideinfo build");
    }
    if (warm->parsed()) {
      cmd.SetPathIf("sideinfo_path", w_sideinfo, "side-information file", true);
      cmd.SetPathIf("labels_path", w_labels, "label file", true);
      cmd.SetPathIf("embedding_cache_path", w_out, "", false);
      if (!w_dataset.empty()) {
        RequireFile(w_dataset, "dataset");
        cmd.Set("/dataset/path"_json_pointer, w_dataset);
      }
      cmd.OutputNextTo(w_out);
      return cmd.Run("embed", "embed warm");
    }
    if (score->parsed()) {
      RequireFile(s_dataset, "dataset");
      cmd.Set("/dataset/path"_json_pointer, s_dataset);
      cmd.SetPathIf("sideinfo_path", s_sideinfo, "side-information file", true);
      cmd.SetPathIf("labels_path", s_labels, "label file", true);
      cmd.SetPathIf("breakdowns_path", s_out, "", false);
      if (!s_mode.empty()) cmd.Set("/scoring/mode"_json_pointer, s_mode);
      if (!s_weights.empty()) cmd.Set("/scoring/weights"_json_pointer, ParseWeights(s_weights));
      if (s_all_pairs) cmd.Set("/score_pairs"_json_pointer, "all_ordered_pairs");
      cmd.OutputNextTo(s_out);
      return cmd.Run("score", "score");
    }
    if (eval_run->parsed()) {
      RequireFile(e_dataset, "dataset");
      cmd.Set("/dataset/path"_json_pointer, e_dataset);
      cmd.SetPathIf("sideinfo_path", e_sideinfo, "side-information file", true);
      cmd.SetPathIf("report_path", e_out, "", false);
      if (e_ablation) cmd.Set("/ablation"_json_pointer, true);
      cmd.OutputNextTo(e_out);
      return cmd.Run("eval", "eval run");
    }
    if (gap->parsed()) {
      RequireFile(g_predictions, "predictions file");
      Owned out;
      const zsre_status st = zsre_gap_from_predictions(g_predictions.c_str(), g_size, g_json ? 1 : 0, &out.p);
      if (st != ZSRE_OK) return Report(st);
      std::cout << out.str();
      if (g_json) std::cout << "\n";
      return kExitOk;
    }
    if (explain->parsed()) {
      RequireFile(x_dataset, "dataset");
      cmd.Set("/dataset/path"_json_pointer, x_dataset);
      cmd.SetPathIf("sideinfo_path", x_sideinfo, "side-information file", true);
      cmd.SetPathIf("labels_path", x_labels, "label file", true);
      zsre_session* s = cmd.Open();
      if (s == nullptr) return Report(cmd.last_status());
      Owned out;
      const zsre_status st = zsre_session_explain(s, x_doc.c_str(), x_head, x_tail, nullptr, x_json ? 1 : 0, &out.p);
      // Newly computed embeddings are not persisted by explain.
      zsre_session_destroy(s);
      if (st != ZSRE_OK) return Report(st);
      std::cout << out.str();
      if (x_json) std::cout << "\n";
      return kExitOk;
    }
    if (run->parsed()) {
      return cmd.Run(r_stages, "run");
    }
    if (config->parsed()) {
      zsre_session* s = cmd.Open();
      if (s == nullptr) return Report(cmd.last_status());
      Owned out;
      zsre_session_config(s, &out.p);
      zsre_session_destroy(s);
      std::cout << out.str() << "\n";
      return kExitOk;
    }
  } catch (const ConfigProblem& e) {
    std::fprintf(stderr, "error: %s [ConfigError]\n", e.what());
    return kExitConfig;
  }
  return kExitConfig;
}
