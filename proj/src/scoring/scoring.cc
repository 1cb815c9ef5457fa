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

#include "scoring/scoring.h"

#include <algorithm>
#include <cmath>

#include "common/error.h"

namespace zsre::scoring {
namespace {

double Mean(std::span<const double> xs) {
  double sum = 0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

}  // namespace

void ScoreComponents::Validate() const {
  const auto values = AsArray();
  for (size_t i = 0; i < kNumComponents; ++i) {
    if (!(values[i] >= -1.0 && values[i] <= 1.0)) {
      throw Error(ErrorCode::kRange, std::string("component ") + kComponentNames[i] + " = " +
                                         std::to_string(values[i]) + " outside [-1, 1]");
    }
  }
}

nlohmann::json ScoreComponents::ToJson() const {
  nlohmann::json j = nlohmann::json::object();
  const auto values = AsArray();
  for (size_t i = 0; i < kNumComponents; ++i) j[kComponentNames[i]] = values[i];
  return j;
}

void Weights::Validate() const {
  const auto w = AsArray();
  double sum = 0;
  for (size_t i = 0; i < kNumComponents; ++i) {
    if (!(w[i] >= 0.0) || !std::isfinite(w[i])) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("weight ") + kComponentNames[i] + " must be a finite value >= 0");
    }
    sum += w[i];
  }
  if (std::abs(sum - 1.0) > kTolerance) {
    throw Error(ErrorCode::kInvalidArgument, "weights sum to " + std::to_string(sum) + ", expected 1");
  }
}

nlohmann::json Weights::ToJson() const {
  nlohmann::json j = nlohmann::json::object();
  const auto w = AsArray();
  for (size_t i = 0; i < kNumComponents; ++i) j[kComponentNames[i]] = w[i];
  return j;
}

Weights Weights::FromJson(const nlohmann::json& j) {
  auto w = Weights{}.AsArray();
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto pos = std::find_if(kComponentNames.begin(), kComponentNames.end(),
                            [&](const char* n) { return it.key() == n; });
    if (pos == kComponentNames.end()) {
      throw Error(ErrorCode::kInvalidArgument, "unknown weight '" + it.key() + "'");
    }
    w[static_cast<size_t>(pos - kComponentNames.begin())] = it.value().get<double>();
  }
  return FromArray(w);
}

ScoringMode ParseScoringMode(const std::string& name) {
  for (ScoringMode m : kAllModes) {
    if (ScoringModeName(m) == name) return m;
  }
  throw Error(ErrorCode::kConfig, "unknown scoring mode '" + name + "'");
}

std::string ScoringModeName(ScoringMode mode) {
  switch (mode) {
    case ScoringMode::kDescOnly: return "desc_only";
    case ScoringMode::kDescHypernym: return "desc_hypernym";
    case ScoringMode::kDescType: return "desc_type";
    case ScoringMode::kDescHypType: return "desc_hyp_type";
    case ScoringMode::kFullWeighted: return "full_weighted";
  }
  return "full_weighted";
}

RoleAggregation ParseRoleAggregation(const std::string& name) {
  if (name == "score_mean") return RoleAggregation::kScoreMean;
  if (name == "vector_mean_then_cosine") return RoleAggregation::kVectorMeanThenCosine;
  throw Error(ErrorCode::kConfig, "unknown role aggregation '" + name + "'");
}

std::string RoleAggregationName(RoleAggregation agg) {
  return agg == RoleAggregation::kScoreMean ? "score_mean" : "vector_mean_then_cosine";
}

nlohmann::json ScoringOptions::ToJson() const {
  return {{"mode", ScoringModeName(mode)},
          {"weights", weights.ToJson()},
          {"role_agg", RoleAggregationName(role_agg)},
          {"confidence_excludes_context", confidence_excludes_context}};
}

ScoringOptions ScoringOptions::FromJson(const nlohmann::json& j) {
  ScoringOptions o;
  if (j.contains("mode")) o.mode = ParseScoringMode(j["mode"].get<std::string>());
  if (j.contains("weights")) o.weights = Weights::FromJson(j["weights"]);
  if (j.contains("role_agg")) o.role_agg = ParseRoleAggregation(j["role_agg"].get<std::string>());
  o.confidence_excludes_context = j.value("confidence_excludes_context", false);
  return o;
}

nlohmann::json ScoreBreakdown::ToJson() const {
  return {{"label", label},
          {"components", components.ToJson()},
          {"weighted_sum", weighted_sum},
          {"confidence", confidence},
          {"final_score", final_score},
          {"mode_score", mode_score}};
}

double Cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cosine of vectors with dims " + std::to_string(u.size()) + " and " + std::to_string(v.size()));
  }
  double dot = 0, uu = 0, vv = 0;
  for (size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) throw Error(ErrorCode::kZeroVector, "cosine of a zero vector");
  return std::clamp(dot / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

double RoleBasedScore(double head_role_sim, double tail_role_sim) {
  for (double s : {head_role_sim, tail_role_sim}) {
    if (!(s >= -1.0 && s <= 1.0)) {
      throw Error(ErrorCode::kRange, "role similarity " + std::to_string(s) + " outside [-1, 1]");
    }
  }
  return (head_role_sim + tail_role_sim) / 2.0;
}

double Confidence(const ScoreComponents& components, bool exclude_context) {
  components.Validate();
  const auto all = components.AsArray();
  const std::span<const double> s(all.data(), exclude_context ? kNumComponents - 1 : kNumComponents);
  const double mean = Mean(s);
  double sq = 0;
  for (double x : s) sq += (x - mean) * (x - mean);
  const double pstdev = std::sqrt(sq / static_cast<double>(s.size()));
  return std::clamp((mean + (1.0 - pstdev)) / 2.0, 0.0, 1.0);
}

ScoreBreakdown DynamicWeightedScore(const ScoreComponents& components, const Weights& weights,
                                    bool confidence_excludes_context) {
  weights.Validate();
  ScoreBreakdown b;
  b.components = components;
  const auto c = components.AsArray();
  const auto w = weights.AsArray();
  for (size_t i = 0; i < kNumComponents; ++i) b.weighted_sum += w[i] * c[i];
  b.confidence = Confidence(components, confidence_excludes_context);
  b.final_score = b.weighted_sum * b.confidence;
  b.mode_score = b.final_score;
  return b;
}

double ScoreMode(const ScoreComponents& c, ScoringMode mode, const Weights& weights,
                 bool confidence_excludes_context) {
  switch (mode) {
    case ScoringMode::kDescOnly:
      return c.desc;
    case ScoringMode::kDescHypernym:
      return (c.desc + c.head_hyp + c.tail_hyp) / 3.0;
    case ScoringMode::kDescType:
      return (c.desc + c.head_type + c.tail_type) / 3.0;
    case ScoringMode::kDescHypType:
      return (c.desc + c.head_hyp + c.tail_hyp + c.head_type + c.tail_type) / 5.0;
    case ScoringMode::kFullWeighted:
      return DynamicWeightedScore(c, weights, confidence_excludes_context).final_score;
  }
  return 0;
}

void PairEmbeddings::Validate() const {
  const std::pair<const char*, const embedding::EmbeddingVector*> parts[] = {
      {"combined_description", &combined_description},
      {"head_hypernym", &head_hypernym},
      {"tail_hypernym", &tail_hypernym},
      {"head_type", &head_type},
      {"tail_type", &tail_type},
      {"head_role", &head_role},
      {"tail_role", &tail_role},
      {"context", &context}};
  for (const auto& [name, vec] : parts) {
    if (vec->empty()) throw Error(ErrorCode::kMissingEmbedding, std::string("pair embedding '") + name + "' missing");
  }
}

ScoreComponents ComputeComponents(const PairEmbeddings& pair, const embedding::EmbeddingVector& label,
                                  RoleAggregation role_agg) {
  pair.Validate();
  ScoreComponents c;
  c.desc = Cosine(pair.combined_description, label);
  c.head_hyp = Cosine(pair.head_hypernym, label);
  c.tail_hyp = Cosine(pair.tail_hypernym, label);
  c.head_type = Cosine(pair.head_type, label);
  c.tail_type = Cosine(pair.tail_type, label);
  if (role_agg == RoleAggregation::kScoreMean) {
    c.role = RoleBasedScore(Cosine(pair.head_role, label), Cosine(pair.tail_role, label));
  } else {
    const auto f = pair.head_role.values();
    const auto g = pair.tail_role.values();
    if (f.size() != g.size()) throw Error(ErrorCode::kDimensionMismatch, "role embeddings differ in dim");
    std::vector<double> mean(f.size());
    for (size_t i = 0; i < f.size(); ++i) mean[i] = (f[i] + g[i]) / 2.0;
    c.role = Cosine(mean, label.values());
  }
  c.context = Cosine(pair.context, label);
  return c;
}

ScoreBreakdown ScoreLabel(const std::string& label, const ScoreComponents& components,
                          const ScoringOptions& options) {
  ScoreBreakdown b = DynamicWeightedScore(components, options.weights, options.confidence_excludes_context);
  b.label = label;
  b.mode_score = options.mode == ScoringMode::kFullWeighted
                     ? b.final_score
                     : ScoreMode(components, options.mode, options.weights, options.confidence_excludes_context);
  return b;
}

size_t ArgmaxIndex(const std::vector<ScoreBreakdown>& breakdowns) {
  if (breakdowns.empty()) throw Error(ErrorCode::kInvalidArgument, "argmax over no candidates");
  double max = breakdowns.front().mode_score;
  for (const auto& b : breakdowns) max = std::max(max, b.mode_score);
  // First candidate within tolerance of the maximum.
  for (size_t i = 0; i < breakdowns.size(); ++i) {
    if (breakdowns[i].mode_score >= max - kTolerance) return i;
  }
  return 0;
}

Prediction PredictRelation(const PairEmbeddings& pair, const std::vector<std::string>& candidate_labels,
                           const std::map<std::string, embedding::EmbeddingVector>& label_embeddings,
                           const ScoringOptions& options) {
  if (candidate_labels.empty()) throw Error(ErrorCode::kInvalidArgument, "no candidate labels");
  pair.Validate();
  Prediction out;
  out.breakdowns.reserve(candidate_labels.size());
  for (const auto& label : candidate_labels) {
    auto it = label_embeddings.find(label);
    if (it == label_embeddings.end() || it->second.empty()) {
      throw Error(ErrorCode::kMissingEmbedding, "no embedding for label '" + label + "'");
    }
    out.breakdowns.push_back(ScoreLabel(label, ComputeComponents(pair, it->second, options.role_agg), options));
  }
  out.label = out.breakdowns[ArgmaxIndex(out.breakdowns)].label;
  return out;
}

}  // namespace zsre::scoring
