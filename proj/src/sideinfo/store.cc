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

#include "sideinfo/store.h"

#include "common/error.h"
#include "common/io.h"
#include "common/text.h"

namespace zsre::sideinfo {

nlohmann::json SideInfoRecord::ToJson() const {
  return {{"doc_id", doc_id},
          {"entity_index", entity_index},
          {"mention_surface", mention_surface},
          {"entity_type", entity_type},
          {"description", description},
          {"hypernym", hypernym},
          {"generator_model", generator_model},
          {"prompt_version", prompt_version},
          {"created_at", created_at}};
}

SideInfoRecord SideInfoRecord::FromJson(const nlohmann::json& j) {
  SideInfoRecord r;
  r.doc_id = j.at("doc_id").get<std::string>();
  r.entity_index = j.at("entity_index").get<int>();
  r.mention_surface = j.at("mention_surface").get<std::string>();
  r.entity_type = j.at("entity_type").get<std::string>();
  r.description = j.at("description").get<std::string>();
  r.hypernym = j.at("hypernym").get<std::string>();
  r.generator_model = j.value("generator_model", "");
  r.prompt_version = j.value("prompt_version", "");
  r.created_at = j.value("created_at", "");
  return r;
}

SideInfoStore::SideInfoStore(SideInfoStore&& other) noexcept {
  std::lock_guard lock(other.mu_);
  records_ = std::move(other.records_);
  path_ = std::move(other.path_);
  writer_ = std::move(other.writer_);
}

SideInfoStore& SideInfoStore::operator=(SideInfoStore&& other) noexcept {
  if (this != &other) {
    std::scoped_lock lock(mu_, other.mu_);
    records_ = std::move(other.records_);
    path_ = std::move(other.path_);
    writer_ = std::move(other.writer_);
  }
  return *this;
}

SideInfoStore SideInfoStore::FromJsonl(std::string_view contents, const std::string& source) {
  SideInfoStore store;
  const auto lines = text::SplitLines(contents);
  const bool torn_tail = !contents.empty() && contents.back() != '\n';
  for (size_t i = 0; i < lines.size(); ++i) {
    if (text::Trim(lines[i]).empty()) continue;
    try {
      SideInfoRecord rec = SideInfoRecord::FromJson(nlohmann::json::parse(lines[i]));
      RecordKey key{rec.doc_id, rec.entity_index};
      store.records_[key] = std::move(rec);
    } catch (const nlohmann::json::exception& e) {
      if (torn_tail && i + 1 == lines.size()) break;
      throw Error(ErrorCode::kParse, source + ":" + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return store;
}

SideInfoStore SideInfoStore::Load(const std::filesystem::path& path) {
  return FromJsonl(ReadFile(path), path.string());
}

SideInfoStore SideInfoStore::Open(const std::filesystem::path& path) {
  SideInfoStore store;
  if (std::filesystem::exists(path)) {
    std::string contents = ReadFile(path);
    store = FromJsonl(contents, path.string());
    // Drop a torn tail so the next append starts on a fresh line.
    if (!contents.empty() && contents.back() != '\n') {
      const size_t last_nl = contents.rfind('\n');
      contents.resize(last_nl == std::string::npos ? 0 : last_nl + 1);
      WriteFileAtomic(path, contents);
    }
  } else if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  store.path_ = path;
  store.writer_.open(path, std::ios::binary | std::ios::app);
  if (!store.writer_) throw Error(ErrorCode::kIo, "cannot open side-info store " + path.string());
  return store;
}

const SideInfoRecord* SideInfoStore::Find(const std::string& doc_id, int entity_index) const {
  std::lock_guard lock(mu_);
  auto it = records_.find({doc_id, entity_index});
  return it == records_.end() ? nullptr : &it->second;
}

void SideInfoStore::Insert(SideInfoRecord record) {
  std::lock_guard lock(mu_);
  if (writer_.is_open()) {
    writer_ << record.ToJson().dump() << '\n';
    writer_.flush();
    if (!writer_) throw Error(ErrorCode::kIo, "append to side-info store failed");
  }
  RecordKey key{record.doc_id, record.entity_index};
  records_[key] = std::move(record);
}

size_t SideInfoStore::size() const {
  std::lock_guard lock(mu_);
  return records_.size();
}

std::string SideInfoStore::ToJsonl() const {
  std::lock_guard lock(mu_);
  std::string out;
  for (const auto& [key, rec] : records_) {
    out += rec.ToJson().dump();
    out += '\n';
  }
  return out;
}

}  // namespace zsre::sideinfo
