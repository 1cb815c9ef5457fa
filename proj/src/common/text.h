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

#ifndef ZSRE_COMMON_TEXT_H_
#define ZSRE_COMMON_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace zsre::text {

std::string Trim(std::string_view s);
std::string ToLowerAscii(std::string_view s);

// Collapses runs of whitespace to a single space and trims the ends.
std::string CollapseWhitespace(std::string_view s);

// Removes every whitespace character. Used to compare mention surfaces with
// their token spans independent of tokenizer spacing.
std::string StripWhitespace(std::string_view s);

std::string Join(const std::vector<std::string>& parts, std::string_view sep);
std::vector<std::string> SplitWhitespace(std::string_view s);
std::vector<std::string> SplitLines(std::string_view s);

// Lowercased maximal runs of ASCII alphanumerics. Bytes >= 0x80 are kept
// inside tokens so UTF-8 words stay intact.
std::vector<std::string> WordTokens(std::string_view s);

bool StartsWith(std::string_view s, std::string_view prefix);
std::string ReplaceAll(std::string s, std::string_view from, std::string_view to);

}  // namespace zsre::text

#endif  // ZSRE_COMMON_TEXT_H_
