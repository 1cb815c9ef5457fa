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

#include "sideinfo/generator.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <thread>
#include <vector>

#include "common/error.h"
#include "common/io.h"
#include "common/text.h"

namespace zsre::sideinfo {
namespace {

std::vector<ChatMessage> Messages(const PromptTemplate& tmpl,
                                  const std::map<std::string, std::string>& values) {
  std::vector<ChatMessage> messages;
  if (!tmpl.system.empty()) messages.push_back({"system", RenderTemplate(tmpl.system, values)});
  messages.push_back({"user", RenderTemplate(tmpl.user, values)});
  return messages;
}

bool IsTrailingJunk(char c) {
  return c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?' || c == '"' ||
         c == '\'' || c == '`' || c == '*';
}

}  // namespace

void GenerationConfig::Validate() const {
  if (temperature < 0) throw Error(ErrorCode::kConfig, "temperature must be >= 0");
  if (parallelism < 1) throw Error(ErrorCode::kConfig, "parallelism must be >= 1");
  if (max_retries < 0) throw Error(ErrorCode::kConfig, "max_retries must be >= 0");
  if (max_tokens < 1) throw Error(ErrorCode::kConfig, "max_tokens must be >= 1");
  if (max_description_chars == 0) throw Error(ErrorCode::kConfig, "max_description_chars must be > 0");
  if (model_id.empty()) throw Error(ErrorCode::kConfig, "model_id must be non-empty");
}

nlohmann::json GenerationConfig::ToJson() const {
  return {{"model_id", model_id},
          {"temperature", temperature},
          {"max_tokens", max_tokens},
          {"request_timeout_ms", request_timeout.count()},
          {"max_retries", max_retries},
          {"retry_backoff_ms", retry_backoff.count()},
          {"parallelism", parallelism},
          {"max_description_chars", max_description_chars},
          {"context_window_sentences", context_window_sentences},
          {"max_document_chars", max_document_chars}};
}

GenerationConfig GenerationConfig::FromJson(const nlohmann::json& j) {
  GenerationConfig c;
  c.model_id = j.value("model_id", c.model_id);
  c.temperature = j.value("temperature", c.temperature);
  c.max_tokens = j.value("max_tokens", c.max_tokens);
  c.request_timeout = std::chrono::milliseconds(j.value("request_timeout_ms", c.request_timeout.count()));
  c.max_retries = j.value("max_retries", c.max_retries);
  c.retry_backoff = std::chrono::milliseconds(j.value("retry_backoff_ms", c.retry_backoff.count()));
  c.parallelism = j.value("parallelism", c.parallelism);
  c.max_description_chars = j.value("max_description_chars", c.max_description_chars);
  c.context_window_sentences = j.value("context_window_sentences", c.context_window_sentences);
  c.max_document_chars = j.value("max_document_chars", c.max_document_chars);
  return c;
}

std::string DocumentContext(const corpus::Document& doc, int entity_index,
                            const GenerationConfig& cfg) {
  if (entity_index < 0 || entity_index >= static_cast<int>(doc.entities.size())) {
    throw Error(ErrorCode::kIndex, "entity index " + std::to_string(entity_index) +
                                       " out of range for document '" + doc.doc_id + "'");
  }
  const int num_sents = static_cast<int>(doc.sentences.size());
  std::set<int> mention_sents;
  for (const auto& m : doc.entities[static_cast<size_t>(entity_index)].mentions) {
    mention_sents.insert(m.sent_index);
  }

  auto render = [&](const std::set<int>& keep) {
    std::vector<std::string> lines;
    for (int s : keep) lines.push_back(doc.SentenceText(s));
    return text::Join(lines, "\n");
  };

  std::set<int> keep;
  if (cfg.context_window_sentences < 0) {
    for (int s = 0; s < num_sents; ++s) keep.insert(s);
  } else {
    for (int s : mention_sents) {
      for (int k = std::max(0, s - cfg.context_window_sentences);
           k <= std::min(num_sents - 1, s + cfg.context_window_sentences); ++k) {
        keep.insert(k);
      }
    }
  }
  std::string context = render(keep);
  if (context.size() > cfg.max_document_chars) {
    context = render(mention_sents);
    if (context.size() > cfg.max_document_chars) context.resize(cfg.max_document_chars);
  }
  return context;
}

std::string CompleteWithRetry(ChatClient& client, const ChatRequest& request,
                              const GenerationConfig& cfg) {
  for (int attempt = 0;; ++attempt) {
    try {
      return client.Complete(request);
    } catch (const ServiceError& e) {
      if (!e.retryable() || attempt >= cfg.max_retries) throw;
      std::this_thread::sleep_for(cfg.retry_backoff * (1 << std::min(attempt, 10)));
    }
  }
}

std::string NormalizeDescription(const std::string& raw, size_t max_chars) {
  std::string desc = text::CollapseWhitespace(raw);
  if (desc.size() <= max_chars) return desc;
  size_t cut = desc.rfind(' ', max_chars);
  if (cut == std::string::npos || cut == 0) cut = max_chars;
  desc.resize(cut);
  return text::Trim(desc);
}

std::string GenerateDescription(const corpus::Document& doc, int entity_index, ChatClient& client,
                                const GenerationConfig& cfg, const PromptSet& prompts) {
  const std::string context = DocumentContext(doc, entity_index, cfg);
  const auto& entity = doc.entities[static_cast<size_t>(entity_index)];
  ChatRequest req;
  req.model = cfg.model_id;
  req.temperature = cfg.temperature;
  req.max_tokens = cfg.max_tokens;
  req.messages = Messages(prompts.description, {{"title", doc.title},
                                                {"document", context},
                                                {"entity", entity.surface()},
                                                {"entity_type", entity.entity_type}});
  const std::string desc = NormalizeDescription(CompleteWithRetry(client, req, cfg),
                                                cfg.max_description_chars);
  if (desc.empty()) {
    throw Error(ErrorCode::kEmptyCompletion,
                "empty description for '" + entity.surface() + "' in document '" + doc.doc_id + "'");
  }
  return desc;
}

std::string NormalizeHypernym(const std::string& raw, const std::string& mention_surface) {
  std::string h;
  for (const auto& line : text::SplitLines(raw)) {
    h = text::Trim(line);
    if (!h.empty()) break;
  }
  h = text::ToLowerAscii(text::CollapseWhitespace(h));
  if (text::StartsWith(h, "hypernym:")) h = text::Trim(h.substr(9));

  const std::string surface = text::ToLowerAscii(text::CollapseWhitespace(mention_surface));
  if (!surface.empty() && text::StartsWith(h, surface + " is ")) h = h.substr(surface.size() + 4);

  auto strip_edges = [](std::string& s) {
    while (!s.empty() && (IsTrailingJunk(s.back()) || s.back() == ' ')) s.pop_back();
    size_t i = 0;
    while (i < s.size() && (s[i] == '"' || s[i] == '\'' || s[i] == '`' || s[i] == '*' || s[i] == ' ')) ++i;
    s.erase(0, i);
  };
  strip_edges(h);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::string_view article : {"a ", "an ", "the "}) {
      if (text::StartsWith(h, article)) {
        h.erase(0, article.size());
        changed = true;
      }
    }
    strip_edges(h);
  }

  if (h.empty()) throw Error(ErrorCode::kEmptyCompletion, "empty hypernym completion");
  const size_t words = text::SplitWhitespace(h).size();
  if (words > kMaxHypernymWords) {
    throw Error(ErrorCode::kFormat, "hypernym has " + std::to_string(words) + " words (max " +
                                        std::to_string(kMaxHypernymWords) + "): '" + h + "'");
  }
  return h;
}

std::string GenerateHypernym(const std::string& mention_surface, const std::string& entity_type,
                             const std::string& description, ChatClient& client,
                             const GenerationConfig& cfg, const PromptSet& prompts) {
  if (mention_surface.empty() || entity_type.empty() || description.empty()) {
    throw Error(ErrorCode::kEmptyField, "hypernym generation needs surface, type and description");
  }
  ChatRequest req;
  req.model = cfg.model_id;
  req.temperature = cfg.temperature;
  req.max_tokens = cfg.max_tokens;
  req.messages = Messages(prompts.hypernym, {{"entity", mention_surface},
                                             {"entity_type", entity_type},
                                             {"description", description}});
  return NormalizeHypernym(CompleteWithRetry(client, req, cfg), mention_surface);
}

BuildStats BuildSideInfo(const corpus::Dataset& dataset, ChatClient& client,
                         const GenerationConfig& cfg, SideInfoStore& store,
                         const PromptSet& prompts) {
  cfg.Validate();
  struct Job {
    const corpus::Document* doc;
    int entity_index;
  };
  std::vector<Job> jobs;
  BuildStats stats;
  for (const auto& doc : dataset.documents) {
    for (const auto& entity : doc.entities) {
      if (store.Contains(doc.doc_id, entity.entity_index)) {
        ++stats.cached;
      } else {
        jobs.push_back({&doc, entity.entity_index});
      }
    }
  }
  if (jobs.empty()) return stats;

  std::atomic<size_t> next{0};
  std::atomic<size_t> completed{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mu;

  auto worker = [&] {
    while (!failed.load()) {
      const size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      const Job& job = jobs[i];
      try {
        const auto& entity = job.doc->entities[static_cast<size_t>(job.entity_index)];
        SideInfoRecord rec;
        rec.doc_id = job.doc->doc_id;
        rec.entity_index = job.entity_index;
        rec.mention_surface = entity.surface();
        rec.entity_type = entity.entity_type;
        rec.description = GenerateDescription(*job.doc, job.entity_index, client, cfg, prompts);
        rec.hypernym = GenerateHypernym(rec.mention_surface, rec.entity_type, rec.description,
                                        client, cfg, prompts);
        rec.generator_model = cfg.model_id;
        rec.prompt_version = prompts.version();
        rec.created_at = UtcTimestamp();
        store.Insert(std::move(rec));
        ++completed;
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        failed = true;
      }
    }
  };

  const size_t n_threads = std::min(jobs.size(), static_cast<size_t>(cfg.parallelism));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(n_threads);
    for (size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
  }
  stats.generated = completed.load();

  if (first_error) {
    const std::string suffix = " [" + std::to_string(stats.generated) +
                               " records completed in this run, " + std::to_string(store.size()) +
                               " stored]";
    try {
      std::rethrow_exception(first_error);
    } catch (const ServiceError& e) {
      throw ServiceError(e.status(), e.body(), "side-info generation" + suffix);
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + suffix);
    }
  }
  return stats;
}

}  // namespace zsre::sideinfo
