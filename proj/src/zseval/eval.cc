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

#include "zseval/eval.h"

#include <fmt/format.h>

#include <map>
#include <optional>

#include "common/error.h"
#include "zseval/features.h"

namespace zsre::zseval {
namespace {

struct GoldPair {
  PairRef ref;
  std::vector<std::string> gold_labels;  // one per gold relation, in file order
  int sentence_gap = 0;
};

std::vector<GoldPair> CollectGoldPairs(const corpus::Dataset& dataset) {
  std::vector<GoldPair> out;
  for (const auto& doc : dataset.documents) {
    for (const auto& [h, t] : corpus::EnumerateEntityPairs(doc, corpus::PairMode::kGoldPairs)) {
      GoldPair gp;
      gp.ref = {&doc, h, t};
      for (const auto& rel : doc.gold_relations) {
        if (rel.head_index == h && rel.tail_index == t) gp.gold_labels.push_back(rel.relation_label);
      }
      gp.sentence_gap = corpus::SentenceGap(doc, h, t);
      out.push_back(std::move(gp));
    }
  }
  return out;
}

std::string PercentCell(const SizeSummary& s) {
  return fmt::format("{:.2f} ± {:.2f}", 100.0 * s.mean_f1, 10000.0 * s.variance);
}

}  // namespace

void EvalConfig::Validate(size_t inventory_size) const {
  if (sizes.empty()) throw Error(ErrorCode::kConfig, "eval sizes must be non-empty");
  if (samples_per_size < 1) throw Error(ErrorCode::kConfig, "samples_per_size must be >= 1");
  for (int n : sizes) {
    if (n < 1 || static_cast<size_t>(n) > inventory_size) {
      throw Error(ErrorCode::kSize, "unseen-set size " + std::to_string(n) + " exceeds the label inventory (" +
                                        std::to_string(inventory_size) + " labels)");
    }
  }
  scoring.weights.Validate();
}

nlohmann::json EvalConfig::ToJson() const {
  return {{"sizes", sizes},
          {"samples_per_size", samples_per_size},
          {"master_seed", master_seed},
          {"scoring", scoring.ToJson()},
          {"verbatim_appendix_prompts", prompts.verbatim_appendix_prompts},
          {"raw_labels", prompts.raw_labels},
          {"exclude_zero_support", exclude_zero_support}};
}

EvalConfig EvalConfig::FromJson(const nlohmann::json& j) {
  EvalConfig c;
  if (j.contains("sizes")) c.sizes = j["sizes"].get<std::vector<int>>();
  c.samples_per_size = j.value("samples_per_size", c.samples_per_size);
  c.master_seed = j.value("master_seed", c.master_seed);
  if (j.contains("scoring")) c.scoring = scoring::ScoringOptions::FromJson(j["scoring"]);
  c.prompts.verbatim_appendix_prompts = j.value("verbatim_appendix_prompts", false);
  c.prompts.raw_labels = j.value("raw_labels", false);
  c.exclude_zero_support = j.value("exclude_zero_support", false);
  return c;
}

nlohmann::json RunResult::ToJson() const {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& s : per_label) per.push_back(s.ToJson());
  return {{"size", size},
          {"sample", sample},
          {"seed", seed},
          {"labels", labels},
          {"macro_f1", macro_f1},
          {"label_hit_rate", label_hit_rate},
          {"num_records", records.size()},
          {"per_label", per}};
}

nlohmann::json SizeSummary::ToJson() const {
  return {{"size", size},
          {"f1s", f1s},
          {"mean_f1", mean_f1},
          {"variance", variance},
          {"gap_table", GapTableToJson(gap_table)}};
}

nlohmann::json EvalReport::ToJson() const {
  nlohmann::json runs_json = nlohmann::json::array();
  for (const auto& r : runs) runs_json.push_back(r.ToJson());
  nlohmann::json sizes_json = nlohmann::json::array();
  for (const auto& s : sizes) sizes_json.push_back(s.ToJson());
  return {{"schema_version", kReportSchemaVersion}, {"config", config}, {"runs", runs_json}, {"sizes", sizes_json}};
}

std::string EvalReport::RecordsJsonl() const {
  std::string out;
  for (const auto& run : runs) {
    for (const auto& rec : run.records) {
      nlohmann::json j = rec.ToJson();
      j["size"] = run.size;
      j["sample"] = run.sample;
      out += j.dump();
      out += '\n';
    }
  }
  return out;
}

std::string EvalReport::RenderText() const {
  std::string out;
  const std::string mode = config.contains("scoring") ? config["scoring"].value("mode", "") : "";
  out += fmt::format("Macro F1 (%), mean ± variance over runs   mode: {}\n", mode);
  out += fmt::format("{:<6} {:>20} {:>6}\n", "n", "F1", "runs");
  for (const auto& s : sizes) {
    out += fmt::format("{:<6} {:>20} {:>6}\n", s.size, PercentCell(s), s.f1s.size());
  }
  for (const auto& s : sizes) {
    out += fmt::format("\nSentence gap between head and tail, n = {}\n", s.size);
    out += RenderGapTable(s.gap_table);
  }
  return out;
}

EvalReport RunZeroShotEval(const corpus::Dataset& dataset, const sideinfo::SideInfoStore& store,
                           embedding::Embedder& embedder, const EvalConfig& cfg) {
  const std::vector<std::string> inventory = dataset.OrderedLabels();
  cfg.Validate(inventory.size());

  const std::vector<GoldPair> gold = CollectGoldPairs(dataset);
  std::vector<PairRef> refs;
  refs.reserve(gold.size());
  for (const auto& g : gold) refs.push_back(g.ref);
  CheckSideInfoCoverage(refs, store);

  std::vector<embedding::PairTexts> texts;
  texts.reserve(gold.size());
  for (const auto& r : refs) texts.push_back(TextsForPair(r, store, cfg.prompts));
  const EmbeddedFeatures features = EmbedFeatures(texts, inventory, embedder, cfg.prompts);

  std::map<std::string, size_t> label_pos;
  for (size_t i = 0; i < inventory.size(); ++i) label_pos[inventory[i]] = i;

  // Components depend only on (pair, label); compute each once.
  std::vector<std::vector<std::optional<scoring::ScoreComponents>>> memo(
      gold.size(), std::vector<std::optional<scoring::ScoreComponents>>(inventory.size()));
  auto components = [&](size_t pair, size_t label) -> const scoring::ScoreComponents& {
    auto& slot = memo[pair][label];
    if (!slot) {
      slot = scoring::ComputeComponents(features.pairs[pair], features.labels.at(inventory[label]),
                                        cfg.scoring.role_agg);
    }
    return *slot;
  };

  EvalReport report;
  report.config = cfg.ToJson();
  report.config["dataset"] = dataset.name;
  report.config["inventory_size"] = inventory.size();

  for (int n : cfg.sizes) {
    SizeSummary summary;
    summary.size = n;
    std::vector<PredictionRecord> size_records;
    for (int k = 0; k < cfg.samples_per_size; ++k) {
      RunResult run;
      run.size = n;
      run.sample = k;
      run.seed = RunSeed(cfg.master_seed, n, k);
      run.labels = SampleUnseenLabels(inventory, n, run.seed);
      std::set<std::string> unseen(run.labels.begin(), run.labels.end());

      for (size_t p = 0; p < gold.size(); ++p) {
        const GoldPair& g = gold[p];
        if (std::none_of(g.gold_labels.begin(), g.gold_labels.end(),
                         [&](const std::string& l) { return unseen.contains(l); })) {
          continue;
        }
        std::vector<scoring::ScoreBreakdown> breakdowns;
        breakdowns.reserve(run.labels.size());
        for (const auto& label : run.labels) {
          breakdowns.push_back(scoring::ScoreLabel(label, components(p, label_pos.at(label)), cfg.scoring));
        }
        const scoring::ScoreBreakdown& best = breakdowns[scoring::ArgmaxIndex(breakdowns)];
        for (const auto& gl : g.gold_labels) {
          if (!unseen.contains(gl)) continue;
          run.records.push_back({g.ref.doc->doc_id, g.ref.head, g.ref.tail, gl, best.label, best.mode_score,
                                 g.sentence_gap});
        }
      }

      run.macro_f1 = MacroF1(run.records, run.labels, cfg.exclude_zero_support);
      run.per_label = PerLabelStats(run.records, run.labels);
      size_t hit = 0;
      for (const auto& s : run.per_label) hit += s.true_positives > 0 ? 1 : 0;
      run.label_hit_rate = static_cast<double>(hit) / static_cast<double>(run.labels.size());

      summary.f1s.push_back(run.macro_f1);
      size_records.insert(size_records.end(), run.records.begin(), run.records.end());
      report.runs.push_back(std::move(run));
    }
    double sum = 0;
    for (double f : summary.f1s) sum += f;
    summary.mean_f1 = sum / static_cast<double>(summary.f1s.size());
    summary.variance = PopulationVariance(summary.f1s);
    summary.gap_table = GapAnalysis(size_records);
    report.sizes.push_back(std::move(summary));
  }
  return report;
}

std::string RenderAblationTable(const std::vector<std::pair<std::string, EvalReport>>& reports) {
  if (reports.empty()) return "";
  std::string out = fmt::format("{:<16}", "mode");
  for (const auto& s : reports.front().second.sizes) out += fmt::format(" {:>20}", "n=" + std::to_string(s.size));
  out += '\n';
  for (const auto& [mode, report] : reports) {
    out += fmt::format("{:<16}", mode);
    for (const auto& s : report.sizes) out += fmt::format(" {:>20}", PercentCell(s));
    out += '\n';
  }
  return out;
}

}  // namespace zsre::zseval
