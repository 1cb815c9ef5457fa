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

#ifndef ZSRE_SIDEINFO_CHAT_CLIENT_H_
#define ZSRE_SIDEINFO_CHAT_CLIENT_H_

#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

namespace zsre::sideinfo {

struct ChatMessage {
  std::string role;
  std::string content;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int max_tokens = 256;

  // {model, messages: [{role, content}], temperature, max_tokens}
  nlohmann::json ToJson() const;
};

// A chat-completion backend. Implementations return the first choice's
// message content and throw ServiceError on failure. Must be safe to call
// from several threads.
class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual std::string Complete(const ChatRequest& request) = 0;
  // True when calls leave the process.
  virtual bool is_remote() const { return true; }
};

// POST {base_url}/v1/chat/completions, reading choices[0].message.content.
class HttpChatClient : public ChatClient {
 public:
  HttpChatClient(std::string base_url, std::string api_key, std::chrono::milliseconds timeout);
  std::string Complete(const ChatRequest& request) override;

 private:
  std::string base_url_;
  std::string api_key_;
  std::chrono::milliseconds timeout_;
};

// Deterministic local client that answers the default prompts without a
// model: descriptions are the document lines that mention the entity,
// hypernyms come from a surface -> hypernym lexicon, falling back to
// "<type> entity".
class ExtractiveStubClient : public ChatClient {
 public:
  explicit ExtractiveStubClient(std::map<std::string, std::string> hypernym_lexicon = {});
  static ExtractiveStubClient FromLexiconFile(const std::string& path);

  std::string Complete(const ChatRequest& request) override;
  bool is_remote() const override { return false; }

 private:
  std::map<std::string, std::string> lexicon_;
};

// Adapts a plain function (tests, C API callbacks).
class FunctionChatClient : public ChatClient {
 public:
  using Fn = std::function<std::string(const ChatRequest&)>;
  explicit FunctionChatClient(Fn fn, bool remote = true) : fn_(std::move(fn)), remote_(remote) {}
  std::string Complete(const ChatRequest& request) override { return fn_(request); }
  bool is_remote() const override { return remote_; }

 private:
  Fn fn_;
  bool remote_;
};

// Counts calls to the wrapped client.
class CountingChatClient : public ChatClient {
 public:
  explicit CountingChatClient(std::shared_ptr<ChatClient> inner) : inner_(std::move(inner)) {}
  std::string Complete(const ChatRequest& request) override {
    ++calls_;
    return inner_->Complete(request);
  }
  bool is_remote() const override { return inner_->is_remote(); }
  uint64_t calls() const { return calls_.load(); }

 private:
  std::shared_ptr<ChatClient> inner_;
  std::atomic<uint64_t> calls_{0};
};

// Used under --offline: every call is a cache miss.
class OfflineChatClient : public ChatClient {
 public:
  std::string Complete(const ChatRequest& request) override;
  bool is_remote() const override { return false; }
};

}  // namespace zsre::sideinfo

#endif  // ZSRE_SIDEINFO_CHAT_CLIENT_H_
