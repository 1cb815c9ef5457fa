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

#ifndef ZSRE_SIDEINFO_STORE_H_
#define ZSRE_SIDEINFO_STORE_H_

#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>

#include "json.hpp"

namespace zsre::sideinfo {

// Side information for one entity cluster of one document.
struct SideInfoRecord {
  std::string doc_id;
  int entity_index = 0;
  std::string mention_surface;
  std::string entity_type;
  std::string description;
  std::string hypernym;
  std::string generator_model;
  std::string prompt_version;
  std::string created_at;

  nlohmann::json ToJson() const;
  static SideInfoRecord FromJson(const nlohmann::json& j);

  bool operator==(const SideInfoRecord&) const = default;
};

using RecordKey = std::pair<std::string, int>;

// Map (doc_id, entity_index) -> record, optionally backed by an append-only
// JSONL file. Insert() appends and flushes before returning, so a crash loses
// nothing that Insert() already acknowledged. When a key occurs on several
// lines the last one wins. A torn final line (no trailing newline) is ignored.
class SideInfoStore {
 public:
  SideInfoStore() = default;

  // Loads `path` if it exists; subsequent inserts append to it.
  static SideInfoStore Open(const std::filesystem::path& path);
  // Parses a JSONL file without attaching a writer.
  static SideInfoStore Load(const std::filesystem::path& path);

  SideInfoStore(SideInfoStore&& other) noexcept;
  SideInfoStore& operator=(SideInfoStore&& other) noexcept;

  const SideInfoRecord* Find(const std::string& doc_id, int entity_index) const;
  bool Contains(const std::string& doc_id, int entity_index) const {
    return Find(doc_id, entity_index) != nullptr;
  }

  // Thread-safe.
  void Insert(SideInfoRecord record);

  size_t size() const;
  const std::map<RecordKey, SideInfoRecord>& records() const { return records_; }
  const std::optional<std::filesystem::path>& path() const { return path_; }

  // One JSON object per line, in key order.
  std::string ToJsonl() const;
  static SideInfoStore FromJsonl(std::string_view contents, const std::string& source = "<memory>");

 private:
  std::map<RecordKey, SideInfoRecord> records_;
  std::optional<std::filesystem::path> path_;
  std::ofstream writer_;
  mutable std::mutex mu_;
};

}  // namespace zsre::sideinfo

#endif  // ZSRE_SIDEINFO_STORE_H_
