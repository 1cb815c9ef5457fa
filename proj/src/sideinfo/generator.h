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

#ifndef ZSRE_SIDEINFO_GENERATOR_H_
#define ZSRE_SIDEINFO_GENERATOR_H_

#include <chrono>
#include <string>

#include "corpus/corpus.h"
#include "json.hpp"
#include "sideinfo/chat_client.h"
#include "sideinfo/prompts.h"
#include "sideinfo/store.h"

namespace zsre::sideinfo {

struct GenerationConfig {
  std::string model_id = "gpt-4o-mini";
  double temperature = 0.0;
  int max_tokens = 256;
  std::chrono::milliseconds request_timeout{60000};
  // Retries after the first attempt, for retryable service failures only.
  int max_retries = 3;
  std::chrono::milliseconds retry_backoff{500};
  int parallelism = 4;
  size_t max_description_chars = 512;
  // Sentences of context kept on each side of the entity's mentions;
  // negative means the whole document.
  int context_window_sentences = -1;
  // Document text budget; beyond it only the mention sentences are sent.
  size_t max_document_chars = 16000;

  // Throws Error(kConfig) when an invariant does not hold.
  void Validate() const;

  nlohmann::json ToJson() const;
  // Missing keys keep their defaults.
  static GenerationConfig FromJson(const nlohmann::json& j);
};

constexpr size_t kMaxHypernymWords = 8;

// The document lines shown to the description generator for one entity.
std::string DocumentContext(const corpus::Document& doc, int entity_index,
                            const GenerationConfig& cfg);

// Calls the client, retrying retryable ServiceErrors with exponential backoff.
std::string CompleteWithRetry(ChatClient& client, const ChatRequest& request,
                              const GenerationConfig& cfg);

// Throws ServiceError, Error(kEmptyCompletion), Error(kIndex).
std::string GenerateDescription(const corpus::Document& doc, int entity_index, ChatClient& client,
                                const GenerationConfig& cfg,
                                const PromptSet& prompts = PromptSet::Defaults());

// Throws ServiceError, Error(kEmptyCompletion), Error(kFormat),
// Error(kEmptyField) for empty inputs.
std::string GenerateHypernym(const std::string& mention_surface, const std::string& entity_type,
                             const std::string& description, ChatClient& client,
                             const GenerationConfig& cfg,
                             const PromptSet& prompts = PromptSet::Defaults());

// Lowercases, keeps the first line, drops a leading "<surface> is" clause,
// articles, quotes and trailing punctuation. Throws kEmptyCompletion when
// nothing is left and kFormat when more than kMaxHypernymWords words remain.
std::string NormalizeHypernym(const std::string& raw, const std::string& mention_surface = "");

// Collapses whitespace and truncates at a word boundary to max_chars.
std::string NormalizeDescription(const std::string& raw, size_t max_chars);

struct BuildStats {
  size_t generated = 0;
  size_t cached = 0;
};

// Ensures every (document, entity) has a record in `store`. Existing records
// are reused. Each new record is persisted as soon as it is complete; on
// failure the error message carries the number of records completed by this
// call and the store stays valid.
BuildStats BuildSideInfo(const corpus::Dataset& dataset, ChatClient& client,
                         const GenerationConfig& cfg, SideInfoStore& store,
                         const PromptSet& prompts = PromptSet::Defaults());

}  // namespace zsre::sideinfo

#endif  // ZSRE_SIDEINFO_GENERATOR_H_
