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

#ifndef ZSRE_EMBEDDING_PROMPTS_H_
#define ZSRE_EMBEDDING_PROMPTS_H_

#include <string>

#include "sideinfo/store.h"

namespace zsre::embedding {

enum class Role { kHead, kTail };

struct PromptOptions {
  // Render the tail role prompt with "subject", exactly as the published
  // template prints it, instead of "object".
  bool verbatim_appendix_prompts = false;
  // Embed relation labels exactly as stored.
  bool raw_labels = false;
};

// "{type} acting as a subject, described as {hypernym}" for the head;
// "... as an object, ..." for the tail unless verbatim. Throws kEmptyField.
std::string RenderRolePrompt(const std::string& entity_type, const std::string& hypernym, Role role,
                             bool verbatim_appendix_prompts = false);

// "Relation between {head_hypernym} and {tail_hypernym}". Throws kEmptyField.
std::string RenderContextPrompt(const std::string& head_hypernym, const std::string& tail_hypernym);

// "Head entity: {head} Tail entity: {tail}". Throws kEmptyField.
std::string CombineDescriptions(const std::string& head_description,
                                const std::string& tail_description);

// Underscores become spaces, ASCII lowercased, whitespace collapsed.
std::string NormalizeRelationLabel(const std::string& label);

// The eight texts embedded for one ordered entity pair.
struct PairTexts {
  std::string combined_description;
  std::string head_hypernym;
  std::string tail_hypernym;
  std::string head_type;
  std::string tail_type;
  std::string head_role;
  std::string tail_role;
  std::string context;

  std::vector<std::string> All() const {
    return {combined_description, head_hypernym, tail_hypernym, head_type,
            tail_type,            head_role,     tail_role,     context};
  }
};

PairTexts BuildPairTexts(const sideinfo::SideInfoRecord& head, const sideinfo::SideInfoRecord& tail,
                         const PromptOptions& options = {});

}  // namespace zsre::embedding

#endif  // ZSRE_EMBEDDING_PROMPTS_H_
