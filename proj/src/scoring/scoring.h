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

#ifndef ZSRE_SCORING_SCORING_H_
#define ZSRE_SCORING_SCORING_H_

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "embedding/encoder.h"
#include "json.hpp"

namespace zsre::scoring {

inline constexpr double kTolerance = 1e-9;
inline constexpr size_t kNumComponents = 7;

// Cosine similarities of the pair's feature embeddings against one relation
// label embedding.
struct ScoreComponents {
  double desc = 0;       // combined descriptions
  double head_hyp = 0;   // head hypernym
  double tail_hyp = 0;   // tail hypernym
  double head_type = 0;  // head entity type
  double tail_type = 0;  // tail entity type
  double role = 0;       // role prompts, head and tail aggregated
  double context = 0;    // "Relation between ..." prompt

  std::array<double, kNumComponents> AsArray() const {
    return {desc, head_hyp, tail_hyp, head_type, tail_type, role, context};
  }
  static ScoreComponents FromArray(const std::array<double, kNumComponents>& a) {
    return {a[0], a[1], a[2], a[3], a[4], a[5], a[6]};
  }
  // Throws kRange unless every component is in [-1, 1].
  void Validate() const;

  nlohmann::json ToJson() const;
  bool operator==(const ScoreComponents&) const = default;
};

inline constexpr std::array<const char*, kNumComponents> kComponentNames = {
    "desc", "head_hyp", "tail_hyp", "head_type", "tail_type", "role", "context"};

struct Weights {
  double desc = 0.4;
  double head_hyp = 0.1;
  double tail_hyp = 0.1;
  double head_type = 0.1;
  double tail_type = 0.1;
  double role = 0.1;
  double context = 0.1;

  std::array<double, kNumComponents> AsArray() const {
    return {desc, head_hyp, tail_hyp, head_type, tail_type, role, context};
  }
  static Weights FromArray(const std::array<double, kNumComponents>& a) {
    return {a[0], a[1], a[2], a[3], a[4], a[5], a[6]};
  }
  // Throws kInvalidArgument unless all weights are >= 0 and sum to 1
  // within kTolerance.
  void Validate() const;

  nlohmann::json ToJson() const;
  // Keys are the component names; missing keys keep their defaults.
  static Weights FromJson(const nlohmann::json& j);
};

enum class ScoringMode { kDescOnly, kDescHypernym, kDescType, kDescHypType, kFullWeighted };

ScoringMode ParseScoringMode(const std::string& name);
std::string ScoringModeName(ScoringMode mode);
inline constexpr std::array<ScoringMode, 5> kAllModes = {
    ScoringMode::kDescOnly, ScoringMode::kDescHypernym, ScoringMode::kDescType,
    ScoringMode::kDescHypType, ScoringMode::kFullWeighted};

// How the head and tail role prompts become one component.
enum class RoleAggregation { kScoreMean, kVectorMeanThenCosine };

RoleAggregation ParseRoleAggregation(const std::string& name);
std::string RoleAggregationName(RoleAggregation agg);

struct ScoringOptions {
  ScoringMode mode = ScoringMode::kFullWeighted;
  Weights weights;
  RoleAggregation role_agg = RoleAggregation::kScoreMean;
  // Compute confidence over six components, leaving out context.
  bool confidence_excludes_context = false;

  nlohmann::json ToJson() const;
  static ScoringOptions FromJson(const nlohmann::json& j);
};

struct ScoreBreakdown {
  std::string label;
  ScoreComponents components;
  double weighted_sum = 0;
  double confidence = 0;
  // weighted_sum * confidence.
  double final_score = 0;
  // The score the active mode ranks by; equals final_score in full_weighted.
  double mode_score = 0;

  nlohmann::json ToJson() const;
};

// dot(u, v) / (|u| |v|), clamped to [-1, 1]. Throws kDimensionMismatch and
// kZeroVector.
double Cosine(std::span<const double> u, std::span<const double> v);
inline double Cosine(const embedding::EmbeddingVector& u, const embedding::EmbeddingVector& v) {
  return Cosine(u.values(), v.values());
}

// Mean of the head and tail role similarities. Throws kRange outside [-1, 1].
double RoleBasedScore(double head_role_sim, double tail_role_sim);

// clamp((mean(S) + (1 - pstdev(S))) / 2, 0, 1) over the seven components,
// or six when context is excluded.
double Confidence(const ScoreComponents& components, bool exclude_context = false);

// weighted_sum = sum(w_i * c_i); final_score = weighted_sum * confidence.
ScoreBreakdown DynamicWeightedScore(const ScoreComponents& components, const Weights& weights,
                                    bool confidence_excludes_context = false);

// desc_only: desc. desc_hypernym / desc_type: unweighted mean of desc with
// both hypernym / type similarities. desc_hyp_type: mean of those five.
// full_weighted: DynamicWeightedScore(...).final_score.
double ScoreMode(const ScoreComponents& components, ScoringMode mode, const Weights& weights = {},
                 bool confidence_excludes_context = false);

// Embeddings for one ordered entity pair.
struct PairEmbeddings {
  embedding::EmbeddingVector combined_description;  // a
  embedding::EmbeddingVector head_hypernym;         // b
  embedding::EmbeddingVector tail_hypernym;         // c
  embedding::EmbeddingVector head_type;             // d
  embedding::EmbeddingVector tail_type;             // e
  embedding::EmbeddingVector head_role;             // f
  embedding::EmbeddingVector tail_role;             // g
  embedding::EmbeddingVector context;

  // Throws kMissingEmbedding naming the first empty vector.
  void Validate() const;
};

ScoreComponents ComputeComponents(const PairEmbeddings& pair, const embedding::EmbeddingVector& label,
                                  RoleAggregation role_agg = RoleAggregation::kScoreMean);

// Full breakdown for one label under `options`.
ScoreBreakdown ScoreLabel(const std::string& label, const ScoreComponents& components,
                          const ScoringOptions& options);

struct Prediction {
  std::string label;
  // One per candidate, in candidate order.
  std::vector<ScoreBreakdown> breakdowns;
};

// Index of the highest mode_score; the earliest wins ties within kTolerance.
size_t ArgmaxIndex(const std::vector<ScoreBreakdown>& breakdowns);

// Scores every candidate and returns the argmax label. Throws
// kInvalidArgument for an empty candidate list and kMissingEmbedding when a
// label or pair vector is missing.
Prediction PredictRelation(const PairEmbeddings& pair, const std::vector<std::string>& candidate_labels,
                           const std::map<std::string, embedding::EmbeddingVector>& label_embeddings,
                           const ScoringOptions& options);

}  // namespace zsre::scoring

#endif  // ZSRE_SCORING_SCORING_H_
