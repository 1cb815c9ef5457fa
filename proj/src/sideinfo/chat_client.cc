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

#include "sideinfo/chat_client.h"

#include "common/error.h"
#include "common/http.h"
#include "common/io.h"
#include "common/text.h"

namespace zsre::sideinfo {
namespace {

// Value of the first "Key: value" line.
std::string FieldValue(const std::vector<std::string>& lines, std::string_view key) {
  for (const auto& line : lines) {
    if (text::StartsWith(line, key)) return text::Trim(std::string_view(line).substr(key.size()));
  }
  return "";
}

}  // namespace

nlohmann::json ChatRequest::ToJson() const {
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
  return {{"model", model}, {"messages", msgs}, {"temperature", temperature}, {"max_tokens", max_tokens}};
}

HttpChatClient::HttpChatClient(std::string base_url, std::string api_key,
                               std::chrono::milliseconds timeout)
    : base_url_(std::move(base_url)), api_key_(std::move(api_key)), timeout_(timeout) {}

std::string HttpChatClient::Complete(const ChatRequest& request) {
  std::vector<std::pair<std::string, std::string>> headers;
  if (!api_key_.empty()) headers.emplace_back("Authorization", "Bearer " + api_key_);
  const http::Response resp =
      http::PostJson(base_url_, "/v1/chat/completions", request.ToJson().dump(), headers, timeout_);
  if (resp.status != 200) throw ServiceError(resp.status, resp.body, "chat completion");
  try {
    const auto body = nlohmann::json::parse(resp.body);
    const auto& content = body.at("choices").at(0).at("message").at("content");
    return content.is_null() ? std::string() : content.get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ServiceError(resp.status, resp.body, std::string("malformed chat completion: ") + e.what());
  }
}

ExtractiveStubClient::ExtractiveStubClient(std::map<std::string, std::string> hypernym_lexicon)
    : lexicon_(std::move(hypernym_lexicon)) {}

ExtractiveStubClient ExtractiveStubClient::FromLexiconFile(const std::string& path) {
  const auto j = nlohmann::json::parse(ReadFile(path));
  std::map<std::string, std::string> lexicon;
  for (auto it = j.begin(); it != j.end(); ++it) lexicon[it.key()] = it.value().get<std::string>();
  return ExtractiveStubClient(std::move(lexicon));
}

std::string ExtractiveStubClient::Complete(const ChatRequest& request) {
  if (request.messages.empty()) return "";
  const auto lines = text::SplitLines(request.messages.back().content);
  const std::string entity = FieldValue(lines, "Entity:");
  const std::string type = FieldValue(lines, "Entity type:");
  if (!FieldValue(lines, "Description:").empty()) {
    auto it = lexicon_.find(entity);
    if (it != lexicon_.end()) return it->second;
    return text::ToLowerAscii(type) + " entity";
  }
  // Description prompt: collect the document lines that mention the entity.
  std::vector<std::string> hits;
  bool in_document = false;
  for (const auto& line : lines) {
    if (line == "Document:") {
      in_document = true;
      continue;
    }
    if (in_document && text::Trim(line).empty()) break;
    if (in_document && !entity.empty() && line.find(entity) != std::string::npos) {
      hits.push_back(text::Trim(line));
    }
  }
  if (hits.empty()) return entity + " is a " + text::ToLowerAscii(type) + ".";
  return text::Join(hits, " ");
}

std::string OfflineChatClient::Complete(const ChatRequest& request) {
  throw Error(ErrorCode::kOfflineCacheMiss,
              "offline mode: side information missing, a chat completion would be required (model " +
                  request.model + ")");
}

}  // namespace zsre::sideinfo
