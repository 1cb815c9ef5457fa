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

#include "common/error.h"

namespace zsre {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kFileNotFound: return "FileNotFound";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kSchema: return "SchemaError";
    case ErrorCode::kIndex: return "IndexError";
    case ErrorCode::kService: return "ServiceError";
    case ErrorCode::kEmptyCompletion: return "EmptyCompletion";
    case ErrorCode::kFormat: return "FormatError";
    case ErrorCode::kEmptyField: return "EmptyField";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kRange: return "RangeError";
    case ErrorCode::kMissingEmbedding: return "MissingEmbedding";
    case ErrorCode::kSize: return "SizeError";
    case ErrorCode::kLabelOutOfSet: return "LabelOutOfSet";
    case ErrorCode::kCoverage: return "CoverageError";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kStage: return "StageError";
    case ErrorCode::kOfflineCacheMiss: return "OfflineCacheMiss";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kUnknownDocument: return "UnknownDocument";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kInternal: return "InternalError";
  }
  return "Unknown";
}

}  // namespace zsre
