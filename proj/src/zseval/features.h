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

#ifndef ZSRE_ZSEVAL_FEATURES_H_
#define ZSRE_ZSEVAL_FEATURES_H_

#include <map>
#include <string>
#include <vector>

#include "corpus/corpus.h"
#include "embedding/encoder.h"
#include "embedding/prompts.h"
#include "scoring/scoring.h"
#include "sideinfo/store.h"

namespace zsre::zseval {

struct PairRef {
  const corpus::Document* doc = nullptr;
  int head = 0;
  int tail = 0;
};

// Throws kCoverage listing every (doc_id, entity_index) of `pairs` without a
// side-info record.
void CheckSideInfoCoverage(const std::vector<PairRef>& pairs, const sideinfo::SideInfoStore& store);

embedding::PairTexts TextsForPair(const PairRef& pair, const sideinfo::SideInfoStore& store,
                                  const embedding::PromptOptions& options);

// The text embedded for a relation label.
std::string LabelText(const std::string& label, const embedding::PromptOptions& options);

// Embeds all pair texts and labels with one Embed() call. When the embedder
// cannot compute (offline with a remote encoder) and texts are missing from
// the cache, throws kCoverage listing them.
struct EmbeddedFeatures {
  std::vector<scoring::PairEmbeddings> pairs;
  std::map<std::string, embedding::EmbeddingVector> labels;
};

EmbeddedFeatures EmbedFeatures(const std::vector<embedding::PairTexts>& pair_texts,
                               const std::vector<std::string>& labels, embedding::Embedder& embedder,
                               const embedding::PromptOptions& options);

}  // namespace zsre::zseval

#endif  // ZSRE_ZSEVAL_FEATURES_H_
