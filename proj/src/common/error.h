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

#ifndef ZSRE_COMMON_ERROR_H_
#define ZSRE_COMMON_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace zsre {

// Error categories shared by every module. The numeric values are part of
// the C API contract (see zsre.h) and must not be renumbered.
enum class ErrorCode : int {
  kOk = 0,
  kFileNotFound = 1,
  kParse = 2,
  kSchema = 3,
  kIndex = 4,
  kService = 5,
  kEmptyCompletion = 6,
  kFormat = 7,
  kEmptyField = 8,
  kDimensionMismatch = 9,
  kZeroVector = 10,
  kRange = 11,
  kMissingEmbedding = 12,
  kSize = 13,
  kLabelOutOfSet = 14,
  kCoverage = 15,
  kConfig = 16,
  kStage = 17,
  kOfflineCacheMiss = 18,
  kInvalidArgument = 19,
  kUnknownDocument = 20,
  kIo = 21,
  kInternal = 99,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the pipeline when a stage fails; wraps the cause.
class StageError : public Error {
 public:
  StageError(std::string stage, ErrorCode cause, const std::string& message)
      : Error(ErrorCode::kStage, "stage '" + stage + "' failed: " + message),
        stage_(std::move(stage)),
        cause_(cause) {}

  const std::string& stage() const { return stage_; }
  ErrorCode cause() const { return cause_; }

 private:
  std::string stage_;
  ErrorCode cause_;
};

// A remote service failed. `status` is the HTTP status, or 0 when no
// response was received.
class ServiceError : public Error {
 public:
  ServiceError(int status, std::string body, const std::string& context)
      : Error(ErrorCode::kService, context + " (status " + std::to_string(status) + "): " + body),
        status_(status),
        body_(std::move(body)) {}

  int status() const { return status_; }
  const std::string& body() const { return body_; }
  // 0, 408, 429 and 5xx are worth retrying.
  bool retryable() const {
    return status_ == 0 || status_ == 408 || status_ == 429 || status_ >= 500;
  }

 private:
  int status_;
  std::string body_;
};

}  // namespace zsre

#endif  // ZSRE_COMMON_ERROR_H_
