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

#include "zseval/features.h"

#include <set>

#include "common/error.h"

namespace zsre::zseval {
namespace {

constexpr size_t kMaxListed = 20;

std::string ListSome(const std::vector<std::string>& items) {
  std::string out;
  for (size_t i = 0; i < items.size() && i < kMaxListed; ++i) {
    if (i > 0) out += ", ";
    out += items[i];
  }
  if (items.size() > kMaxListed) out += ", ... (" + std::to_string(items.size()) + " total)";
  return out;
}

}  // namespace

void CheckSideInfoCoverage(const std::vector<PairRef>& pairs, const sideinfo::SideInfoStore& store) {
  std::set<std::pair<std::string, int>> missing;
  for (const auto& p : pairs) {
    for (int e : {p.head, p.tail}) {
      if (!store.Contains(p.doc->doc_id, e)) missing.emplace(p.doc->doc_id, e);
    }
  }
  if (missing.empty()) return;
  std::vector<std::string> keys;
  for (const auto& [doc, e] : missing) keys.push_back("(" + doc + ", " + std::to_string(e) + ")");
  throw Error(ErrorCode::kCoverage, "missing side information for " + ListSome(keys));
}

embedding::PairTexts TextsForPair(const PairRef& pair, const sideinfo::SideInfoStore& store,
                                  const embedding::PromptOptions& options) {
  const auto* head = store.Find(pair.doc->doc_id, pair.head);
  const auto* tail = store.Find(pair.doc->doc_id, pair.tail);
  if (head == nullptr || tail == nullptr) {
    throw Error(ErrorCode::kCoverage, "missing side information for pair (" + pair.doc->doc_id + ", " +
                                          std::to_string(pair.head) + ", " + std::to_string(pair.tail) + ")");
  }
  return embedding::BuildPairTexts(*head, *tail, options);
}

std::string LabelText(const std::string& label, const embedding::PromptOptions& options) {
  if (label.empty()) throw Error(ErrorCode::kEmptyField, "relation label is empty");
  return options.raw_labels ? label : embedding::NormalizeRelationLabel(label);
}

EmbeddedFeatures EmbedFeatures(const std::vector<embedding::PairTexts>& pair_texts,
                               const std::vector<std::string>& labels, embedding::Embedder& embedder,
                               const embedding::PromptOptions& options) {
  std::vector<std::string> texts;
  texts.reserve(pair_texts.size() * 8 + labels.size());
  for (const auto& pt : pair_texts) {
    for (auto& t : pt.All()) texts.push_back(std::move(t));
  }
  for (const auto& label : labels) texts.push_back(LabelText(label, options));

  if (!embedder.can_compute()) {
    const auto missing = embedder.Missing(texts);
    if (!missing.empty()) {
      std::vector<std::string> quoted;
      for (const auto& m : missing) quoted.push_back("'" + m + "'");
      throw Error(ErrorCode::kCoverage, "embedding cache is missing " + ListSome(quoted));
    }
  }
  const auto vectors = embedder.Embed(texts);

  EmbeddedFeatures out;
  out.pairs.reserve(pair_texts.size());
  size_t k = 0;
  for (size_t i = 0; i < pair_texts.size(); ++i) {
    scoring::PairEmbeddings pe;
    pe.combined_description = vectors[k++];
    pe.head_hypernym = vectors[k++];
    pe.tail_hypernym = vectors[k++];
    pe.head_type = vectors[k++];
    pe.tail_type = vectors[k++];
    pe.head_role = vectors[k++];
    pe.tail_role = vectors[k++];
    pe.context = vectors[k++];
    out.pairs.push_back(std::move(pe));
  }
  for (const auto& label : labels) out.labels[label] = vectors[k++];
  return out;
}

}  // namespace zsre::zseval
