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

#ifndef ZSRE_COMMON_IO_H_
#define ZSRE_COMMON_IO_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace zsre {

// Reads a whole file. Throws Error(kFileNotFound) if it cannot be opened.
std::string ReadFile(const std::filesystem::path& path);

// Writes via a sibling temp file and rename, so readers never observe a
// half-written file.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view contents);

using Sha256Digest = std::array<uint8_t, 32>;

Sha256Digest Sha256(std::string_view data);
std::string Sha256Hex(std::string_view data);

// Hex digest of a file's bytes, or "absent" if the file does not exist.
std::string FileSha256Hex(const std::filesystem::path& path);

// Current UTC time as ISO-8601 with second precision.
std::string UtcTimestamp();

}  // namespace zsre

#endif  // ZSRE_COMMON_IO_H_
