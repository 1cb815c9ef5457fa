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

#include "embedding/prompts.h"

#include "common/error.h"
#include "common/text.h"

namespace zsre::embedding {

std::string RenderRolePrompt(const std::string& entity_type, const std::string& hypernym, Role role,
                             bool verbatim_appendix_prompts) {
  if (entity_type.empty() || hypernym.empty()) {
    throw Error(ErrorCode::kEmptyField, "role prompt needs a non-empty type and hypernym");
  }
  const char* role_phrase =
      role == Role::kHead || verbatim_appendix_prompts ? "a subject" : "an object";
  return entity_type + " acting as " + role_phrase + ", described as " + hypernym;
}

std::string RenderContextPrompt(const std::string& head_hypernym, const std::string& tail_hypernym) {
  if (head_hypernym.empty() || tail_hypernym.empty()) {
    throw Error(ErrorCode::kEmptyField, "context prompt needs both hypernyms");
  }
  return "Relation between " + head_hypernym + " and " + tail_hypernym;
}

std::string CombineDescriptions(const std::string& head_description,
                                const std::string& tail_description) {
  if (head_description.empty() || tail_description.empty()) {
    throw Error(ErrorCode::kEmptyField, "combined description needs both descriptions");
  }
  return "Head entity: " + head_description + " Tail entity: " + tail_description;
}

std::string NormalizeRelationLabel(const std::string& label) {
  return text::CollapseWhitespace(text::ToLowerAscii(text::ReplaceAll(label, "_", " ")));
}

PairTexts BuildPairTexts(const sideinfo::SideInfoRecord& head, const sideinfo::SideInfoRecord& tail,
                         const PromptOptions& options) {
  PairTexts t;
  t.combined_description = CombineDescriptions(head.description, tail.description);
  t.head_hypernym = head.hypernym;
  t.tail_hypernym = tail.hypernym;
  t.head_type = head.entity_type;
  t.tail_type = tail.entity_type;
  t.head_role = RenderRolePrompt(head.entity_type, head.hypernym, Role::kHead,
                                 options.verbatim_appendix_prompts);
  t.tail_role = RenderRolePrompt(tail.entity_type, tail.hypernym, Role::kTail,
                                 options.verbatim_appendix_prompts);
  t.context = RenderContextPrompt(head.hypernym, tail.hypernym);
  return t;
}

}  // namespace zsre::embedding
