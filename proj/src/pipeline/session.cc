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

#include "pipeline/session.h"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <map>
#include <set>

#include "common/error.h"
#include "common/io.h"
#include "common/text.h"
#include "sideinfo/generator.h"
#include "zseval/features.h"

namespace zsre::pipeline {
namespace {

using nlohmann::json;

constexpr Stage kOrder[] = {Stage::kValidate, Stage::kSideInfo, Stage::kEmbed, Stage::kScore, Stage::kEval};

std::shared_ptr<sideinfo::ChatClient> MakeChatClient(const RunConfig& cfg) {
  if (cfg.llm.provider == LlmProvider::kStub) {
    if (cfg.llm.stub_lexicon) {
      return std::make_shared<sideinfo::ExtractiveStubClient>(
          sideinfo::ExtractiveStubClient::FromLexiconFile(cfg.llm.stub_lexicon->string()));
    }
    return std::make_shared<sideinfo::ExtractiveStubClient>();
  }
  return std::make_shared<sideinfo::HttpChatClient>(cfg.llm.base_url, cfg.llm.api_key,
                                                    cfg.llm.generation.request_timeout);
}

std::vector<zseval::PairRef> PairsOf(const corpus::Dataset& ds, corpus::PairMode mode) {
  std::vector<zseval::PairRef> refs;
  for (const auto& doc : ds.documents) {
    for (const auto& [h, t] : corpus::EnumerateEntityPairs(doc, mode)) refs.push_back({&doc, h, t});
  }
  return refs;
}

// report.json -> report<suffix>, in the same directory.
std::filesystem::path Sibling(const std::filesystem::path& path, const std::string& suffix) {
  return path.parent_path() / (path.stem().string() + suffix);
}

}  // namespace

std::string StageName(Stage stage) {
  switch (stage) {
    case Stage::kValidate: return "validate";
    case Stage::kSideInfo: return "sideinfo";
    case Stage::kEmbed: return "embed";
    case Stage::kScore: return "score";
    case Stage::kEval: return "eval";
  }
  return "?";
}

std::vector<Stage> ParseStages(const std::string& csv) {
  std::set<Stage> wanted;
  for (std::string name : text::SplitWhitespace(text::ReplaceAll(csv, ",", " "))) {
    bool found = false;
    for (Stage s : kOrder) {
      if (StageName(s) == name) {
        wanted.insert(s);
        found = true;
      }
    }
    if (!found) throw Error(ErrorCode::kConfig, "unknown stage '" + name + "'");
  }
  if (wanted.empty()) throw Error(ErrorCode::kConfig, "no stages requested");
  std::vector<Stage> out;
  for (Stage s : kOrder) {
    if (wanted.contains(s)) out.push_back(s);
  }
  return out;
}

std::vector<std::string> LoadLabelFile(const std::filesystem::path& path) {
  const std::string contents = ReadFile(path);
  std::vector<std::string> labels;
  const std::string trimmed = text::Trim(contents);
  if (!trimmed.empty() && trimmed.front() == '[') {
    try {
      labels = json::parse(trimmed).get<std::vector<std::string>>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
    }
  } else {
    for (const auto& line : text::SplitLines(contents)) {
      const std::string l = text::Trim(line);
      if (!l.empty() && l.front() != '#') labels.push_back(l);
    }
  }
  std::vector<std::string> unique;
  for (auto& l : labels) {
    if (l.empty()) throw Error(ErrorCode::kEmptyField, path.string() + ": empty label");
    if (std::find(unique.begin(), unique.end(), l) == unique.end()) unique.push_back(std::move(l));
  }
  if (unique.empty()) throw Error(ErrorCode::kEmptyField, path.string() + ": no labels");
  return unique;
}

zseval::GapTable GapFromPredictions(const std::filesystem::path& path, std::optional<int> size) {
  std::vector<zseval::PredictionRecord> records;
  const auto lines = text::SplitLines(ReadFile(path));
  for (size_t i = 0; i < lines.size(); ++i) {
    if (text::Trim(lines[i]).empty()) continue;
    try {
      const json j = json::parse(lines[i]);
      if (size && j.value("size", -1) != *size) continue;
      records.push_back(zseval::PredictionRecord::FromJson(j));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse, path.string() + ":" + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return zseval::GapAnalysis(records);
}

std::string Explanation::RenderText() const {
  std::string out = fmt::format("{} ({}) {} -> ({}) {}   mode: {}\n", doc_id, head_index, head_surface,
                                tail_index, tail_surface, mode);
  out += fmt::format("  {:<28} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9}\n", "label",
                     "desc", "head_hyp", "tail_hyp", "head_type", "tail_type", "role", "context", "weighted",
                     "conf", "final", "mode");
  for (const auto& row : rows) {
    const auto& b = row.breakdown;
    const auto& c = b.components;
    out += fmt::format("{} {:<28} {:>9.6f} {:>9.6f} {:>9.6f} {:>9.6f} {:>9.6f} {:>9.6f} {:>9.6f} {:>9.6f} {:>9.6f} "
                       "{:>9.6f} {:>9.6f}\n",
                       row.winner ? '*' : ' ', b.label, c.desc, c.head_hyp, c.tail_hyp, c.head_type, c.tail_type,
                       c.role, c.context, b.weighted_sum, b.confidence, b.final_score, b.mode_score);
  }
  return out;
}

json Explanation::ToJson() const {
  json rows_json = json::array();
  for (const auto& row : rows) {
    json r = row.breakdown.ToJson();
    r["winner"] = row.winner;
    rows_json.push_back(std::move(r));
  }
  return {{"doc_id", doc_id},         {"head_index", head_index}, {"tail_index", tail_index},
          {"head_surface", head_surface}, {"tail_surface", tail_surface}, {"mode", mode},
          {"rows", rows_json}};
}

Session::Session(RunConfig cfg, std::shared_ptr<sideinfo::ChatClient> chat,
                 std::shared_ptr<embedding::Encoder> encoder)
    : cfg_(std::move(cfg)) {
  cfg_.Validate();
  prompts_ = cfg_.llm.prompt_dir ? sideinfo::PromptSet::FromDirectory(*cfg_.llm.prompt_dir)
                                 : sideinfo::PromptSet::Defaults();
  if (!chat) chat = MakeChatClient(cfg_);
  // Offline substitution happens per stage; the counter always wraps the
  // real client so that zero remote calls can be observed.
  chat_ = std::make_shared<sideinfo::CountingChatClient>(std::move(chat));
  if (!encoder) encoder = embedding::MakeEncoder(cfg_.encoder);
  encoder_ = std::make_shared<embedding::CountingEncoder>(std::move(encoder));
}

uint64_t Session::remote_chat_calls() const { return chat_->is_remote() ? chat_->calls() : 0; }
uint64_t Session::remote_encoder_calls() const { return encoder_->is_remote() ? encoder_->calls() : 0; }

const corpus::Dataset& Session::dataset() {
  if (!dataset_) {
    if (cfg_.dataset_path.empty()) throw Error(ErrorCode::kConfig, "no dataset configured (--dataset)");
    dataset_ = corpus::LoadDataset(cfg_.dataset_path, cfg_.dataset);
  }
  return *dataset_;
}

sideinfo::SideInfoStore& Session::store() {
  if (!store_) {
    const auto path = cfg_.SideInfoPath();
    if (!std::filesystem::exists(path)) {
      throw Error(ErrorCode::kCoverage, "missing sideinfo: " + path.string() + " does not exist");
    }
    store_ = sideinfo::SideInfoStore::Load(path);
  }
  return *store_;
}

embedding::Embedder& Session::embedder() {
  if (!embedder_) {
    const bool no_network = cfg_.offline || cfg_.dry_run;
    embedder_ = std::make_unique<embedding::Embedder>(cfg_.encoder, encoder_, no_network);
    embedder_->LoadConfiguredCache();
  }
  return *embedder_;
}

std::vector<std::string> Session::CandidateLabels() {
  if (cfg_.labels_path) return LoadLabelFile(*cfg_.labels_path);
  return dataset().OrderedLabels();
}

void Session::Write(const std::filesystem::path& path, const std::string& contents) {
  if (cfg_.dry_run) return;
  WriteFileAtomic(path, contents);
  outputs_.push_back(path.string());
}

json Session::InputHashes() const {
  json h = json::object();
  auto add = [&](const char* name, const std::optional<std::filesystem::path>& p) {
    if (p && !p->empty()) h[name] = FileSha256Hex(*p);
  };
  add("dataset", cfg_.dataset_path);
  add("relation_names", cfg_.dataset.relation_names);
  add("sideinfo", cfg_.SideInfoPath());
  add("embedding_cache", cfg_.EmbeddingCachePath());
  add("labels", cfg_.labels_path);
  add("prompt_dir_description", cfg_.llm.prompt_dir ? std::optional(*cfg_.llm.prompt_dir / "description.txt")
                                                    : std::nullopt);
  add("prompt_dir_hypernym", cfg_.llm.prompt_dir ? std::optional(*cfg_.llm.prompt_dir / "hypernym.txt")
                                                 : std::nullopt);
  add("stub_lexicon", cfg_.llm.stub_lexicon);
  h["prompts"] = Sha256Hex(prompts_.description.system + prompts_.description.user + prompts_.hypernym.system +
                           prompts_.hypernym.user);
  h["config"] = Sha256Hex(cfg_.ToJson().dump());
  return h;
}

json Session::ValidateStage() {
  if (cfg_.dataset_path.empty()) throw Error(ErrorCode::kConfig, "no dataset configured (--dataset)");
  const corpus::ValidationReport report = corpus::ValidateDatasetFile(cfg_.dataset_path, cfg_.dataset);
  json j = report.ToJson();
  Write(Out("validation.json"), j.dump(2) + "\n");
  if (!report.ok() && !cfg_.dataset.lenient) {
    throw Error(ErrorCode::kSchema, std::to_string(report.issues.size()) + " validation issue(s), first: document '" +
                                        report.issues.front().doc_id + "', field '" + report.issues.front().field +
                                        "': " + report.issues.front().message);
  }
  return j;
}

json Session::SideInfoStage() {
  const corpus::Dataset& ds = dataset();
  const auto path = cfg_.SideInfoPath();
  if (cfg_.dry_run) {
    sideinfo::SideInfoStore existing =
        std::filesystem::exists(path) ? sideinfo::SideInfoStore::Load(path) : sideinfo::SideInfoStore();
    size_t missing = 0, total = 0;
    for (const auto& doc : ds.documents) {
      for (const auto& e : doc.entities) {
        ++total;
        if (!existing.Contains(doc.doc_id, e.entity_index)) ++missing;
      }
    }
    return {{"dry_run", true}, {"entities", total}, {"would_generate", missing}, {"path", path.string()}};
  }
  store_.reset();
  sideinfo::SideInfoStore store = sideinfo::SideInfoStore::Open(path);
  outputs_.push_back(path.string());
  std::shared_ptr<sideinfo::ChatClient> client = chat_;
  if (cfg_.offline && chat_->is_remote()) client = std::make_shared<sideinfo::OfflineChatClient>();
  const sideinfo::BuildStats stats = sideinfo::BuildSideInfo(ds, *client, cfg_.llm.generation, store, prompts_);
  sideinfo_stage_ran_ = true;
  store_ = std::move(store);
  return {{"generated", stats.generated}, {"cached", stats.cached}, {"records", store_->size()},
          {"path", path.string()}, {"prompt_version", prompts_.version()}};
}

json Session::EmbedStage() {
  if (cfg_.dry_run && !store_ && !std::filesystem::exists(cfg_.SideInfoPath()) && !cfg_.dataset_path.empty()) {
    // Side information would be generated first; only an upper bound is known.
    const size_t pairs = PairsOf(dataset(), cfg_.score_pairs).size();
    const size_t labels = CandidateLabels().size();
    return {{"dry_run", true}, {"sideinfo_missing", true}, {"pairs", pairs}, {"labels", labels},
            {"texts_upper_bound", pairs * 8 + labels}};
  }
  const sideinfo::SideInfoStore& si = store();
  std::vector<embedding::PairTexts> texts;
  std::vector<std::string> labels;
  if (!cfg_.dataset_path.empty()) {
    const auto refs = PairsOf(dataset(), cfg_.score_pairs);
    zseval::CheckSideInfoCoverage(refs, si);
    for (const auto& r : refs) texts.push_back(zseval::TextsForPair(r, si, cfg_.eval.prompts));
    labels = CandidateLabels();
  } else {
    // No dataset: every ordered pair of entities that share a document.
    std::map<std::string, std::vector<const sideinfo::SideInfoRecord*>> by_doc;
    for (const auto& [key, rec] : si.records()) by_doc[key.first].push_back(&rec);
    for (const auto& [doc, recs] : by_doc) {
      for (const auto* h : recs) {
        for (const auto* t : recs) {
          if (h != t) texts.push_back(embedding::BuildPairTexts(*h, *t, cfg_.eval.prompts));
        }
      }
    }
    if (!cfg_.labels_path) throw Error(ErrorCode::kConfig, "embed warm needs --labels or --dataset");
    labels = LoadLabelFile(*cfg_.labels_path);
  }
  std::vector<std::string> all;
  for (const auto& pt : texts) {
    for (auto& t : pt.All()) all.push_back(std::move(t));
  }
  for (const auto& l : labels) all.push_back(zseval::LabelText(l, cfg_.eval.prompts));

  embedding::Embedder& emb = embedder();
  const size_t missing = emb.Missing(all).size();
  if (cfg_.dry_run) {
    return {{"dry_run", true}, {"texts", all.size()}, {"would_embed", missing}};
  }
  emb.Embed(all);
  const auto path = cfg_.EmbeddingCachePath();
  emb.SaveCache(path);
  outputs_.push_back(path.string());
  return {{"pairs", texts.size()}, {"labels", labels.size()}, {"newly_embedded", missing},
          {"cache_entries", emb.cache_size()}, {"path", path.string()}};
}

json Session::ScoreStage() {
  const corpus::Dataset& ds = dataset();
  const sideinfo::SideInfoStore& si = store();
  const auto refs = PairsOf(ds, cfg_.score_pairs);
  const std::vector<std::string> labels = CandidateLabels();
  zseval::CheckSideInfoCoverage(refs, si);
  if (cfg_.dry_run) {
    return {{"dry_run", true}, {"pairs", refs.size()}, {"labels", labels.size()}};
  }
  std::vector<embedding::PairTexts> texts;
  texts.reserve(refs.size());
  for (const auto& r : refs) texts.push_back(zseval::TextsForPair(r, si, cfg_.eval.prompts));
  embedding::Embedder& emb = embedder();
  const auto features = zseval::EmbedFeatures(texts, labels, emb, cfg_.eval.prompts);

  std::string out;
  size_t lines = 0;
  const std::string mode = scoring::ScoringModeName(cfg_.eval.scoring.mode);
  for (size_t i = 0; i < refs.size(); ++i) {
    const auto pred = scoring::PredictRelation(features.pairs[i], labels, features.labels, cfg_.eval.scoring);
    for (const auto& b : pred.breakdowns) {
      json j = b.ToJson();
      j["doc_id"] = refs[i].doc->doc_id;
      j["head_index"] = refs[i].head;
      j["tail_index"] = refs[i].tail;
      j["mode"] = mode;
      j["winner"] = b.label == pred.label;
      out += j.dump();
      out += '\n';
      ++lines;
    }
  }
  Write(cfg_.BreakdownsPath(), out);
  emb.SaveConfiguredCache();
  return {{"pairs", refs.size()}, {"labels", labels.size()}, {"records", lines},
          {"path", cfg_.BreakdownsPath().string()}};
}

json Session::EvalStage(bool ablation) {
  const corpus::Dataset& ds = dataset();
  const sideinfo::SideInfoStore& si = store();
  if (cfg_.dry_run) {
    cfg_.eval.Validate(ds.label_inventory.size());
    return {{"dry_run", true}, {"runs", cfg_.eval.sizes.size() * static_cast<size_t>(cfg_.eval.samples_per_size)}};
  }
  embedding::Embedder& emb = embedder();
  const zseval::EvalReport report = zseval::RunZeroShotEval(ds, si, emb, cfg_.eval);
  const auto report_path = cfg_.ReportPath();
  Write(report_path, report.ToJson().dump(2) + "\n");
  Write(Sibling(report_path, ".txt"), report.RenderText());
  Write(Sibling(report_path, ".predictions.jsonl"), report.RecordsJsonl());

  json summary = {{"report", report_path.string()},
                  {"text", Sibling(report_path, ".txt").string()},
                  {"sizes", json::array()}};
  for (const auto& s : report.sizes) {
    summary["sizes"].push_back({{"size", s.size}, {"mean_f1", s.mean_f1}, {"variance", s.variance}});
  }
  if (ablation || cfg_.ablation) {
    std::vector<std::pair<std::string, zseval::EvalReport>> reports;
    json ablation_json = json::object();
    for (scoring::ScoringMode mode : scoring::kAllModes) {
      zseval::EvalConfig c = cfg_.eval;
      c.scoring.mode = mode;
      zseval::EvalReport r = zseval::RunZeroShotEval(ds, si, emb, c);
      ablation_json[scoring::ScoringModeName(mode)] = r.ToJson();
      reports.emplace_back(scoring::ScoringModeName(mode), std::move(r));
    }
    Write(Sibling(report_path, ".ablation.json"), ablation_json.dump(2) + "\n");
    Write(Sibling(report_path, ".ablation.txt"), zseval::RenderAblationTable(reports));
    summary["ablation"] = Sibling(report_path, ".ablation.txt").string();
  }
  emb.SaveConfiguredCache();
  return summary;
}

Explanation Session::Explain(const std::string& doc_id, int head_index, int tail_index,
                             const std::optional<std::vector<std::string>>& labels) {
  const corpus::Dataset& ds = dataset();
  const corpus::Document* doc = ds.FindDocument(doc_id);
  if (doc == nullptr) throw Error(ErrorCode::kUnknownDocument, "no document '" + doc_id + "'");
  const int n = static_cast<int>(doc->entities.size());
  if (head_index < 0 || head_index >= n || tail_index < 0 || tail_index >= n || head_index == tail_index) {
    throw Error(ErrorCode::kIndex, "invalid entity pair (" + std::to_string(head_index) + ", " +
                                       std::to_string(tail_index) + ") for document '" + doc_id + "'");
  }
  const std::vector<std::string> candidates = labels ? *labels : CandidateLabels();
  const zseval::PairRef ref{doc, head_index, tail_index};
  const auto texts = zseval::TextsForPair(ref, store(), cfg_.eval.prompts);
  embedding::Embedder& emb = embedder();
  std::vector<std::string> all = texts.All();
  for (const auto& l : candidates) all.push_back(zseval::LabelText(l, cfg_.eval.prompts));
  if (!emb.can_compute() && !emb.Missing(all).empty()) {
    throw Error(ErrorCode::kMissingEmbedding, "embedding cache is cold for this pair (" +
                                                  std::to_string(emb.Missing(all).size()) + " texts missing)");
  }
  const auto features = zseval::EmbedFeatures({texts}, candidates, emb, cfg_.eval.prompts);
  const auto pred = scoring::PredictRelation(features.pairs.front(), candidates, features.labels, cfg_.eval.scoring);

  Explanation ex;
  ex.doc_id = doc_id;
  ex.head_index = head_index;
  ex.tail_index = tail_index;
  ex.head_surface = doc->entities[static_cast<size_t>(head_index)].surface();
  ex.tail_surface = doc->entities[static_cast<size_t>(tail_index)].surface();
  ex.mode = scoring::ScoringModeName(cfg_.eval.scoring.mode);
  const size_t winner = scoring::ArgmaxIndex(pred.breakdowns);
  for (size_t i = 0; i < pred.breakdowns.size(); ++i) ex.rows.push_back({pred.breakdowns[i], i == winner});
  std::stable_sort(ex.rows.begin(), ex.rows.end(), [](const ExplainRow& a, const ExplainRow& b) {
    if (a.winner != b.winner) return a.winner;
    return a.breakdown.mode_score > b.breakdown.mode_score;
  });
  return ex;
}

RunSummary Session::Run(const std::vector<Stage>& stages, const std::string& command) {
  RunSummary summary;
  outputs_.clear();
  const json hashes = InputHashes();
  json manifest = {{"tool", "zsre"},
                   {"version", kVersion},
                   {"command", command},
                   {"config", cfg_.ToJson()},
                   {"prompt_versions",
                    {{"description", prompts_.description.version}, {"hypernym", prompts_.hypernym.version}}},
                   {"input_hashes", hashes},
                   {"timings_ms", json::object()},
                   {"stages", json::array()}};
  for (Stage s : stages) manifest["stages"].push_back(StageName(s));

  auto finish = [&](const std::string& status, const std::string& failed_stage, const std::string& error) {
    manifest["status"] = status;
    manifest["outputs"] = outputs_;
    if (!failed_stage.empty()) {
      manifest["failed_stage"] = failed_stage;
      manifest["error"] = error;
      // Everything in "outputs" is partial for this run.
      manifest["partial"] = true;
    }
    if (!cfg_.dry_run) WriteFileAtomic(Out("manifest.json"), manifest.dump(2) + "\n");
    summary.manifest = manifest;
  };

  for (Stage s : stages) {
    const auto t0 = std::chrono::steady_clock::now();
    StageReport rep{s, json::object(), 0};
    try {
      switch (s) {
        case Stage::kValidate: rep.summary = ValidateStage(); break;
        case Stage::kSideInfo: rep.summary = SideInfoStage(); break;
        case Stage::kEmbed: rep.summary = EmbedStage(); break;
        case Stage::kScore: rep.summary = ScoreStage(); break;
        case Stage::kEval: rep.summary = EvalStage(); break;
      }
    } catch (const Error& e) {
      finish("failed", StageName(s), e.what());
      if (e.code() == ErrorCode::kConfig) throw;
      throw StageError(StageName(s), e.code(), e.what());
    } catch (const std::exception& e) {
      finish("failed", StageName(s), e.what());
      throw StageError(StageName(s), ErrorCode::kInternal, e.what());
    }
    rep.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    manifest["timings_ms"][StageName(s)] = rep.millis;
    summary.stages.push_back(std::move(rep));
  }
  finish("ok", "", "");
  return summary;
}

}  // namespace zsre::pipeline
