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

#include "zsre/zsre.h"

#include <cstdlib>
#include <cstring>
#include <functional>
#include <memory>
#include <string>

#include "common/error.h"
#include "corpus/corpus.h"
#include "json.hpp"
#include "pipeline/config.h"
#include "pipeline/session.h"
#include "scoring/scoring.h"
#include "zseval/metrics.h"

using nlohmann::json;

struct zsre_session {
  std::unique_ptr<zsre::pipeline::Session> impl;
};

struct zsre_dataset {
  zsre::corpus::Dataset impl;
};

struct zsre_reply {
  std::string text;
  bool set = false;
};

namespace {

struct LastError {
  std::string message;
  std::string stage;
  zsre_status cause = ZSRE_OK;
};

thread_local LastError g_last;

zsre_status Fail(zsre_status status, std::string message) {
  g_last.message = std::move(message);
  g_last.stage.clear();
  g_last.cause = status;
  return status;
}

// Runs `fn`, translating exceptions into status codes.
zsre_status Guard(const std::function<void()>& fn) {
  g_last = {};
  try {
    fn();
    return ZSRE_OK;
  } catch (const zsre::StageError& e) {
    g_last.message = e.what();
    g_last.stage = e.stage();
    g_last.cause = static_cast<zsre_status>(e.cause());
    return ZSRE_STAGE;
  } catch (const zsre::Error& e) {
    return Fail(static_cast<zsre_status>(e.code()), e.what());
  } catch (const json::exception& e) {
    return Fail(ZSRE_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(ZSRE_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(ZSRE_INTERNAL, e.what());
  }
}

char* Dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p == nullptr) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void Emit(char** out, const std::string& s) {
  if (out != nullptr) *out = Dup(s);
}

json ParseLayer(const char* text, const char* what) {
  if (text == nullptr || *text == '\0') return json::object();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw zsre::Error(zsre::ErrorCode::kConfig, std::string(what) + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw zsre::Error(zsre::ErrorCode::kConfig, std::string(what) + " must be a JSON object");
  return j;
}

zsre::pipeline::RunConfig Resolve(const char* file_json, const char* flags_json) {
  return zsre::pipeline::ResolveConfig(ParseLayer(file_json, "config file"), zsre::pipeline::ProcessEnvironment(),
                                       ParseLayer(flags_json, "flags"));
}

zsre::corpus::LoadOptions DatasetOptions(const char* format, int lenient) {
  zsre::corpus::LoadOptions opts;
  if (format != nullptr && *format != '\0') opts.format = zsre::corpus::ParseDatasetFormat(format);
  opts.lenient = lenient != 0;
  return opts;
}

void ThrowCallbackStatus(int status, const std::string& what) {
  throw zsre::ServiceError(status == 599 ? 0 : status, "callback returned " + std::to_string(status), what);
}

std::array<double, zsre::scoring::kNumComponents> Components(const double* c) {
  if (c == nullptr) throw zsre::Error(zsre::ErrorCode::kInvalidArgument, "components must not be NULL");
  std::array<double, zsre::scoring::kNumComponents> a{};
  std::copy(c, c + a.size(), a.begin());
  return a;
}

}  // namespace

extern "C" {

int zsre_abi_version(void) { return ZSRE_ABI_VERSION; }
const char* zsre_version(void) { return zsre::pipeline::kVersion; }

const char* zsre_status_name(zsre_status status) {
  // ErrorCodeName returns views into string literals.
  return zsre::ErrorCodeName(static_cast<zsre::ErrorCode>(status)).data();
}

const char* zsre_last_error(void) { return g_last.message.c_str(); }
const char* zsre_last_error_stage(void) { return g_last.stage.c_str(); }
zsre_status zsre_last_error_cause(void) { return g_last.cause; }
void zsre_string_free(char* s) { std::free(s); }

zsre_status zsre_config_resolve(const char* file_json, const char* flags_json, char** out_json) {
  return Guard([&] {
    auto cfg = Resolve(file_json, flags_json);
    cfg.Validate();
    Emit(out_json, cfg.ToJson().dump(2));
  });
}

zsre_status zsre_reply_set(zsre_reply* reply, const char* text) {
  if (reply == nullptr || text == nullptr) return Fail(ZSRE_INVALID_ARGUMENT, "reply and text must not be NULL");
  reply->text = text;
  reply->set = true;
  return ZSRE_OK;
}

zsre_status zsre_session_create(const char* file_json, const char* flags_json, const zsre_session_options* options,
                                zsre_session** out) {
  if (out == nullptr) return Fail(ZSRE_INVALID_ARGUMENT, "out must not be NULL");
  *out = nullptr;
  return Guard([&] {
    auto cfg = Resolve(file_json, flags_json);
    std::shared_ptr<zsre::sideinfo::ChatClient> chat;
    std::shared_ptr<zsre::embedding::Encoder> encoder;
    if (options != nullptr && options->chat != nullptr) {
      const zsre_chat_fn fn = options->chat;
      void* user = options->chat_user;
      chat = std::make_shared<zsre::sideinfo::FunctionChatClient>(
          [fn, user](const zsre::sideinfo::ChatRequest& req) {
            zsre_reply reply;
            const int rc = fn(user, req.ToJson().dump().c_str(), &reply);
            if (rc != 0) ThrowCallbackStatus(rc, "chat callback");
            if (!reply.set) throw zsre::ServiceError(200, "no reply set", "chat callback");
            return reply.text;
          },
          options->chat_is_remote != 0);
    }
    if (options != nullptr && options->encode != nullptr) {
      const zsre_encode_fn fn = options->encode;
      void* user = options->encode_user;
      const size_t dim = static_cast<size_t>(cfg.encoder.dim);
      encoder = std::make_shared<zsre::embedding::FunctionEncoder>(
          [fn, user, dim](const std::vector<std::string>& texts) {
            std::vector<const char*> ptrs;
            ptrs.reserve(texts.size());
            for (const auto& t : texts) ptrs.push_back(t.c_str());
            std::vector<double> flat(texts.size() * dim);
            const int rc = fn(user, ptrs.data(), texts.size(), dim, flat.data());
            if (rc != 0) ThrowCallbackStatus(rc, "encoder callback");
            std::vector<std::vector<double>> rows(texts.size());
            for (size_t i = 0; i < texts.size(); ++i) {
              rows[i].assign(flat.begin() + static_cast<ptrdiff_t>(i * dim),
                             flat.begin() + static_cast<ptrdiff_t>((i + 1) * dim));
            }
            return rows;
          },
          options->encode_is_remote != 0);
    }
    auto s = std::make_unique<zsre_session>();
    s->impl = std::make_unique<zsre::pipeline::Session>(std::move(cfg), chat, encoder);
    *out = s.release();
  });
}

void zsre_session_destroy(zsre_session* session) { delete session; }

zsre_status zsre_session_config(zsre_session* session, char** out_json) {
  if (session == nullptr) return Fail(ZSRE_INVALID_ARGUMENT, "session must not be NULL");
  return Guard([&] { Emit(out_json, session->impl->config().ToJson().dump(2)); });
}

zsre_status zsre_session_run(zsre_session* session, const char* stages_csv, const char* command, char** out_json) {
  if (session == nullptr || stages_csv == nullptr) return Fail(ZSRE_INVALID_ARGUMENT, "session and stages required");
  return Guard([&] {
    const auto stages = zsre::pipeline::ParseStages(stages_csv);
    const auto summary = session->impl->Run(stages, command != nullptr ? command : "run");
    json j = {{"stages", json::array()}, {"manifest", summary.manifest}};
    for (const auto& s : summary.stages) {
      j["stages"].push_back(
          {{"stage", zsre::pipeline::StageName(s.stage)}, {"summary", s.summary}, {"millis", s.millis}});
    }
    Emit(out_json, j.dump(2));
  });
}

zsre_status zsre_session_stage(zsre_session* session, const char* stage, int ablation, char** out_json) {
  if (session == nullptr || stage == nullptr) return Fail(ZSRE_INVALID_ARGUMENT, "session and stage required");
  return Guard([&] {
    const auto stages = zsre::pipeline::ParseStages(stage);
    if (stages.size() != 1) throw zsre::Error(zsre::ErrorCode::kConfig, "exactly one stage expected");
    auto& s = *session->impl;
    json j;
    switch (stages.front()) {
      case zsre::pipeline::Stage::kValidate: j = s.ValidateStage(); break;
      case zsre::pipeline::Stage::kSideInfo: j = s.SideInfoStage(); break;
      case zsre::pipeline::Stage::kEmbed: j = s.EmbedStage(); break;
      case zsre::pipeline::Stage::kScore: j = s.ScoreStage(); break;
      case zsre::pipeline::Stage::kEval: j = s.EvalStage(ablation != 0); break;
    }
    Emit(out_json, j.dump(2));
  });
}

zsre_status zsre_session_explain(zsre_session* session, const char* doc_id, int head_index, int tail_index,
                                 const char* labels_json, int as_json, char** out) {
  if (session == nullptr || doc_id == nullptr) return Fail(ZSRE_INVALID_ARGUMENT, "session and doc_id required");
  return Guard([&] {
    std::optional<std::vector<std::string>> labels;
    if (labels_json != nullptr && *labels_json != '\0') {
      labels = json::parse(labels_json).get<std::vector<std::string>>();
    }
    const auto ex = session->impl->Explain(doc_id, head_index, tail_index, labels);
    Emit(out, as_json != 0 ? ex.ToJson().dump(2) : ex.RenderText());
  });
}

zsre_status zsre_session_remote_calls(zsre_session* session, uint64_t* chat_calls, uint64_t* encoder_calls) {
  if (session == nullptr) return Fail(ZSRE_INVALID_ARGUMENT, "session must not be NULL");
  if (chat_calls != nullptr) *chat_calls = session->impl->remote_chat_calls();
  if (encoder_calls != nullptr) *encoder_calls = session->impl->remote_encoder_calls();
  return ZSRE_OK;
}

zsre_status zsre_dataset_load(const char* path, const char* format, int lenient, zsre_dataset** out) {
  if (path == nullptr || out == nullptr) return Fail(ZSRE_INVALID_ARGUMENT, "path and out required");
  *out = nullptr;
  return Guard([&] {
    auto d = std::make_unique<zsre_dataset>();
    d->impl = zsre::corpus::LoadDataset(path, DatasetOptions(format, lenient));
    *out = d.release();
  });
}

void zsre_dataset_free(zsre_dataset* dataset) { delete dataset; }

size_t zsre_dataset_num_documents(const zsre_dataset* dataset) {
  return dataset == nullptr ? 0 : dataset->impl.documents.size();
}

zsre_status zsre_dataset_labels(const zsre_dataset* dataset, char** out_json) {
  if (dataset == nullptr) return Fail(ZSRE_INVALID_ARGUMENT, "dataset must not be NULL");
  return Guard([&] { Emit(out_json, json(dataset->impl.OrderedLabels()).dump()); });
}

zsre_status zsre_dataset_validate(const char* path, const char* format, char** out_json) {
  if (path == nullptr) return Fail(ZSRE_INVALID_ARGUMENT, "path must not be NULL");
  return Guard([&] {
    Emit(out_json, zsre::corpus::ValidateDatasetFile(path, DatasetOptions(format, 0)).ToJson().dump(2));
  });
}

zsre_status zsre_cosine(const double* a, const double* b, size_t n, double* out) {
  if (a == nullptr || b == nullptr || out == nullptr) return Fail(ZSRE_INVALID_ARGUMENT, "NULL argument");
  return Guard([&] { *out = zsre::scoring::Cosine(std::span<const double>(a, n), std::span<const double>(b, n)); });
}

zsre_status zsre_confidence(const double* components, int exclude_context, double* out) {
  if (out == nullptr) return Fail(ZSRE_INVALID_ARGUMENT, "out must not be NULL");
  return Guard([&] {
    *out = zsre::scoring::Confidence(zsre::scoring::ScoreComponents::FromArray(Components(components)),
                                     exclude_context != 0);
  });
}

zsre_status zsre_dynamic_weighted_score(const double* components, const double* weights, double* weighted_sum,
                                        double* confidence, double* final_score) {
  return Guard([&] {
    const auto c = zsre::scoring::ScoreComponents::FromArray(Components(components));
    const auto w = weights != nullptr ? zsre::scoring::Weights::FromArray(Components(weights))
                                      : zsre::scoring::Weights{};
    const auto b = zsre::scoring::DynamicWeightedScore(c, w);
    if (weighted_sum != nullptr) *weighted_sum = b.weighted_sum;
    if (confidence != nullptr) *confidence = b.confidence;
    if (final_score != nullptr) *final_score = b.final_score;
  });
}

uint64_t zsre_run_seed(uint64_t master_seed, int n, int k) { return zsre::zseval::RunSeed(master_seed, n, k); }

zsre_status zsre_sample_unseen_labels(const char* labels_json, int n, uint64_t seed, char** out_json) {
  if (labels_json == nullptr) return Fail(ZSRE_INVALID_ARGUMENT, "labels_json must not be NULL");
  return Guard([&] {
    const auto labels = json::parse(labels_json).get<std::vector<std::string>>();
    Emit(out_json, json(zsre::zseval::SampleUnseenLabels(labels, n, seed)).dump());
  });
}

zsre_status zsre_gap_from_predictions(const char* path, int size, int as_json, char** out) {
  if (path == nullptr) return Fail(ZSRE_INVALID_ARGUMENT, "path must not be NULL");
  return Guard([&] {
    const auto table =
        zsre::pipeline::GapFromPredictions(path, size < 0 ? std::nullopt : std::optional<int>(size));
    Emit(out, as_json != 0 ? zsre::zseval::GapTableToJson(table).dump(2) : zsre::zseval::RenderGapTable(table));
  });
}

}  // extern "C"
