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

#ifndef ZSRE_SIDEINFO_PROMPTS_H_
#define ZSRE_SIDEINFO_PROMPTS_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace zsre::sideinfo {

// A versioned two-part chat prompt. Placeholders are written {name}.
//
// File format:
//   # version: <id>
//   [system]
//   ...lines...
//   [user]
//   ...lines...
struct PromptTemplate {
  std::string version;
  std::string system;
  std::string user;

  static PromptTemplate Parse(std::string_view contents, const std::string& source);
  static PromptTemplate FromFile(const std::filesystem::path& path);
};

struct PromptSet {
  PromptTemplate description;
  PromptTemplate hypernym;

  // Compiled-in copies of prompts/description.txt and prompts/hypernym.txt.
  static PromptSet Defaults();
  // Reads description.txt and hypernym.txt from `dir`.
  static PromptSet FromDirectory(const std::filesystem::path& dir);

  std::string version() const { return description.version + "+" + hypernym.version; }
};

// Single-pass substitution: text inserted for one placeholder is never
// scanned for further placeholders. Unknown placeholders are left as is.
std::string RenderTemplate(std::string_view tmpl, const std::map<std::string, std::string>& values);

std::string_view DefaultDescriptionPromptText();
std::string_view DefaultHypernymPromptText();

}  // namespace zsre::sideinfo

#endif  // ZSRE_SIDEINFO_PROMPTS_H_
