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

#include "sideinfo/prompts.h"

#include "common/error.h"
#include "common/io.h"
#include "common/text.h"

namespace zsre::sideinfo {
namespace {

constexpr std::string_view kDescriptionPrompt = R"PROMPT(# version: description-v1
[system]
You write short, factual profiles of entities mentioned in news and encyclopedic documents. Use only information stated in or clearly implied by the document.
[user]
Document title: {title}
Document:
{document}

Entity: {entity}
Entity type: {entity_type}

Describe the entity "{entity}" in 1 to 3 sentences. Combine what every sentence mentioning it says about its role, attributes and connections to other entities in the document. Start with the entity name. Return only the description.
)PROMPT";

constexpr std::string_view kHypernymPrompt = R"PROMPT(# version: hypernym-v1
[system]
You name the broader category an entity belongs to.
[user]
Entity: {entity}
Entity type: {entity_type}
Description: {description}

Give one hypernym for the entity: a short noun phrase of at most four words naming the broader category it belongs to, such as "banking institution" or "business executive". Return only the noun phrase, without articles or punctuation.
)PROMPT";

}  // namespace

std::string_view DefaultDescriptionPromptText() { return kDescriptionPrompt; }
std::string_view DefaultHypernymPromptText() { return kHypernymPrompt; }

PromptTemplate PromptTemplate::Parse(std::string_view contents, const std::string& source) {
  PromptTemplate out;
  enum class Section { kHeader, kSystem, kUser } section = Section::kHeader;
  std::vector<std::string> system_lines;
  std::vector<std::string> user_lines;
  for (const std::string& line : text::SplitLines(contents)) {
    if (line == "[system]") {
      section = Section::kSystem;
      continue;
    }
    if (line == "[user]") {
      section = Section::kUser;
      continue;
    }
    switch (section) {
      case Section::kHeader:
        if (text::StartsWith(line, "# version:")) out.version = text::Trim(line.substr(10));
        break;
      case Section::kSystem:
        system_lines.push_back(line);
        break;
      case Section::kUser:
        user_lines.push_back(line);
        break;
    }
  }
  out.system = text::Trim(text::Join(system_lines, "\n"));
  out.user = text::Trim(text::Join(user_lines, "\n"));
  if (out.version.empty() || out.user.empty()) {
    throw Error(ErrorCode::kConfig, "prompt template " + source + " needs a '# version:' line and a [user] section");
  }
  return out;
}

PromptTemplate PromptTemplate::FromFile(const std::filesystem::path& path) {
  return Parse(ReadFile(path), path.string());
}

PromptSet PromptSet::Defaults() {
  return {PromptTemplate::Parse(kDescriptionPrompt, "<builtin description>"),
          PromptTemplate::Parse(kHypernymPrompt, "<builtin hypernym>")};
}

PromptSet PromptSet::FromDirectory(const std::filesystem::path& dir) {
  return {PromptTemplate::FromFile(dir / "description.txt"),
          PromptTemplate::FromFile(dir / "hypernym.txt")};
}

std::string RenderTemplate(std::string_view tmpl, const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(tmpl.size());
  size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      const size_t close = tmpl.find('}', i + 1);
      if (close != std::string_view::npos) {
        auto it = values.find(std::string(tmpl.substr(i + 1, close - i - 1)));
        if (it != values.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(tmpl[i++]);
  }
  return out;
}

}  // namespace zsre::sideinfo
