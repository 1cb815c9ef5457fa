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

// C interface to the zsre library.
//
// Conventions:
//  * Every function returns a zsre_status; 0 is success. On failure the
//    message is available from zsre_last_error() on the same thread until
//    the next call into the library.
//  * Strings are UTF-8 and NUL-terminated. Strings returned through a
//    `char** out` parameter are owned by the caller and released with
//    zsre_string_free().
//  * Handles are opaque. A session must not be used from two threads at
//    once; distinct sessions are independent.

#ifndef ZSRE_ZSRE_H_
#define ZSRE_ZSRE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(ZSRE_BUILDING_LIBRARY)
#define ZSRE_API __attribute__((visibility("default")))
#else
#define ZSRE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define ZSRE_ABI_VERSION 1

typedef enum zsre_status {
  ZSRE_OK = 0,
  ZSRE_FILE_NOT_FOUND = 1,
  ZSRE_PARSE = 2,
  ZSRE_SCHEMA = 3,
  ZSRE_INDEX = 4,
  ZSRE_SERVICE = 5,
  ZSRE_EMPTY_COMPLETION = 6,
  ZSRE_FORMAT = 7,
  ZSRE_EMPTY_FIELD = 8,
  ZSRE_DIMENSION_MISMATCH = 9,
  ZSRE_ZERO_VECTOR = 10,
  ZSRE_RANGE = 11,
  ZSRE_MISSING_EMBEDDING = 12,
  ZSRE_SIZE = 13,
  ZSRE_LABEL_OUT_OF_SET = 14,
  ZSRE_COVERAGE = 15,
  ZSRE_CONFIG = 16,
  ZSRE_STAGE = 17,
  ZSRE_OFFLINE_CACHE_MISS = 18,
  ZSRE_INVALID_ARGUMENT = 19,
  ZSRE_UNKNOWN_DOCUMENT = 20,
  ZSRE_IO = 21,
  ZSRE_INTERNAL = 99
} zsre_status;

typedef struct zsre_session zsre_session;
typedef struct zsre_dataset zsre_dataset;
typedef struct zsre_reply zsre_reply;

ZSRE_API int zsre_abi_version(void);
ZSRE_API const char* zsre_version(void);
// Symbolic name, e.g. "SchemaError". Never NULL.
ZSRE_API const char* zsre_status_name(zsre_status status);
// Message of the last failure on this thread ("" if none).
ZSRE_API const char* zsre_last_error(void);
// After ZSRE_STAGE: the failing stage and the underlying status.
ZSRE_API const char* zsre_last_error_stage(void);
ZSRE_API zsre_status zsre_last_error_cause(void);
ZSRE_API void zsre_string_free(char* s);

// ---- Configuration and sessions -------------------------------------------

// Merges defaults < config file layer < ZSRE_* environment < flag layer.
// Both layers are JSON objects in the config schema (NULL or "" for none).
// Writes the effective configuration (API key redacted) to *out_json.
ZSRE_API zsre_status zsre_config_resolve(const char* file_json, const char* flags_json, char** out_json);

// Chat completion callback. `request_json` is {"model", "messages",
// "temperature", "max_tokens"}. Return 0 after zsre_reply_set(), or an
// HTTP-like status on failure (599 stands for a transport error;
// 408, 429 and 5xx are retried).
typedef int (*zsre_chat_fn)(void* user, const char* request_json, zsre_reply* reply);
ZSRE_API zsre_status zsre_reply_set(zsre_reply* reply, const char* text);

// Encoder callback: fill `out` (n * dim doubles, row-major) for `texts`.
// Return 0 on success, otherwise an HTTP-like status.
typedef int (*zsre_encode_fn)(void* user, const char* const* texts, size_t n, size_t dim, double* out);

typedef struct zsre_session_options {
  zsre_chat_fn chat;  // NULL: use the configured provider
  void* chat_user;
  int chat_is_remote;  // nonzero: blocked under offline mode
  zsre_encode_fn encode;  // NULL: use the configured provider
  void* encode_user;
  int encode_is_remote;
} zsre_session_options;

// `options` may be NULL.
ZSRE_API zsre_status zsre_session_create(const char* file_json, const char* flags_json,
                                         const zsre_session_options* options, zsre_session** out);
ZSRE_API void zsre_session_destroy(zsre_session* session);
// Effective configuration, API key redacted.
ZSRE_API zsre_status zsre_session_config(zsre_session* session, char** out_json);

// Runs comma-separated stages (validate,sideinfo,embed,score,eval) in
// dependency order and writes the run manifest. *out_json (may be NULL)
// receives {"stages": [{"stage", "summary", "millis"}], "manifest": {...}}.
ZSRE_API zsre_status zsre_session_run(zsre_session* session, const char* stages_csv, const char* command,
                                      char** out_json);
// Runs a single stage without writing a manifest. `ablation` only applies to
// "eval".
ZSRE_API zsre_status zsre_session_stage(zsre_session* session, const char* stage, int ablation,
                                        char** out_json);
// Per-label breakdown for one entity pair. `labels_json` is a JSON array of
// candidate labels or NULL for the configured candidates. `as_json` selects
// JSON instead of a text table.
ZSRE_API zsre_status zsre_session_explain(zsre_session* session, const char* doc_id, int head_index,
                                          int tail_index, const char* labels_json, int as_json, char** out);
// Calls that would have left the process so far.
ZSRE_API zsre_status zsre_session_remote_calls(zsre_session* session, uint64_t* chat_calls,
                                               uint64_t* encoder_calls);

// ---- Datasets ---------------------------------------------------------------

// `format` is "docred" or "men"; NULL means "docred".
ZSRE_API zsre_status zsre_dataset_load(const char* path, const char* format, int lenient, zsre_dataset** out);
ZSRE_API void zsre_dataset_free(zsre_dataset* dataset);
ZSRE_API size_t zsre_dataset_num_documents(const zsre_dataset* dataset);
// Label inventory as a sorted JSON array.
ZSRE_API zsre_status zsre_dataset_labels(const zsre_dataset* dataset, char** out_json);
// Collects every issue instead of stopping at the first. The report is
// {"valid", "documents_total", "documents_valid", "entities", "relations",
// "labels", "issues": [{"doc_id", "field", "message"}], ...}.
ZSRE_API zsre_status zsre_dataset_validate(const char* path, const char* format, char** out_json);

// ---- Scoring and evaluation helpers ------------------------------------------

// Components are ordered desc, head_hyp, tail_hyp, head_type, tail_type,
// role, context.
#define ZSRE_NUM_COMPONENTS 7

ZSRE_API zsre_status zsre_cosine(const double* a, const double* b, size_t n, double* out);
ZSRE_API zsre_status zsre_confidence(const double* components, int exclude_context, double* out);
// `weights` may be NULL for the defaults.
ZSRE_API zsre_status zsre_dynamic_weighted_score(const double* components, const double* weights,
                                                 double* weighted_sum, double* confidence, double* final_score);
ZSRE_API uint64_t zsre_run_seed(uint64_t master_seed, int n, int k);
// `labels_json` is a JSON array; the sample is returned as a JSON array in
// inventory order.
ZSRE_API zsre_status zsre_sample_unseen_labels(const char* labels_json, int n, uint64_t seed, char** out_json);
// Gap table from a predictions JSONL file. `size` < 0 uses every record.
ZSRE_API zsre_status zsre_gap_from_predictions(const char* path, int size, int as_json, char** out);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // ZSRE_ZSRE_H_
