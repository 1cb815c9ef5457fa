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

#ifndef ZSRE_TESTS_SUPPORT_TEST_UTIL_H_
#define ZSRE_TESTS_SUPPORT_TEST_UTIL_H_

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "corpus/corpus.h"
#include "json.hpp"
#include "sideinfo/store.h"

namespace zsre::testing {

inline std::filesystem::path SourceDir() { return ZSRE_SOURCE_DIR; }

// Values frozen by the independent Python oracle (tests/oracle).
inline const nlohmann::json& Golden() {
  static const nlohmann::json golden = [] {
    std::ifstream in(SourceDir() / "tests/oracle/golden.json");
    return nlohmann::json::parse(in);
  }();
  return golden;
}

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("zsre_test_" + std::to_string(rd()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void WriteText(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  out << contents;
}

inline std::string ReadText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline size_t CountLines(const std::filesystem::path& path) {
  size_t n = 0;
  std::ifstream in(path);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) ++n;
  }
  return n;
}

// A small DocRED-schema document. Entities are given as (surface, type,
// sent_id, start); each surface must match the tokens at that position.
struct MiniEntity {
  std::string surface;
  std::string type;
  std::vector<std::pair<int, int>> mentions;  // (sent_id, start)
};

inline nlohmann::json MiniDocred(const std::string& title, const std::vector<std::string>& sentences,
                                 const std::vector<MiniEntity>& entities,
                                 const std::vector<std::tuple<int, int, std::string>>& labels) {
  nlohmann::json doc;
  doc["title"] = title;
  doc["sents"] = nlohmann::json::array();
  for (const auto& s : sentences) {
    std::vector<std::string> toks;
    std::istringstream ss(s);
    for (std::string t; ss >> t;) toks.push_back(t);
    doc["sents"].push_back(toks);
  }
  doc["vertexSet"] = nlohmann::json::array();
  for (const auto& e : entities) {
    nlohmann::json cluster = nlohmann::json::array();
    int width = 0;
    {
      std::istringstream ss(e.surface);
      for (std::string t; ss >> t;) ++width;
    }
    for (const auto& [sid, start] : e.mentions) {
      cluster.push_back({{"name", e.surface}, {"type", e.type}, {"sent_id", sid}, {"pos", {start, start + width}}});
    }
    doc["vertexSet"].push_back(cluster);
  }
  doc["labels"] = nlohmann::json::array();
  for (const auto& [h, t, r] : labels) doc["labels"].push_back({{"h", h}, {"t", t}, {"r", r}, {"evidence", {}}});
  return doc;
}

// Two documents with three entities each.
inline nlohmann::json TwoDocCorpus() {
  return nlohmann::json::array(
      {MiniDocred("Doc A", {"Ana Silva works at Orbit Labs .", "Orbit Labs is based in Lisbon ."},
                  {{"Ana Silva", "PER", {{0, 0}}}, {"Orbit Labs", "ORG", {{0, 4}, {1, 0}}}, {"Lisbon", "LOC", {{1, 5}}}},
                  {{0, 1, "employer"}, {1, 2, "headquarters location"}}),
       MiniDocred("Doc B", {"Tom Reed wrote Blue Book .", "Tom Reed was born in Porto ."},
                  {{"Tom Reed", "PER", {{0, 0}, {1, 0}}}, {"Blue Book", "MISC", {{0, 3}}}, {"Porto", "LOC", {{1, 5}}}},
                  {{1, 0, "author"}, {0, 2, "place of birth"}})});
}

inline sideinfo::SideInfoRecord Record(const std::string& doc, int idx, const std::string& surface,
                                       const std::string& type, const std::string& desc, const std::string& hyp) {
  sideinfo::SideInfoRecord r;
  r.doc_id = doc;
  r.entity_index = idx;
  r.mention_surface = surface;
  r.entity_type = type;
  r.description = desc;
  r.hypernym = hyp;
  r.generator_model = "test";
  r.prompt_version = "test";
  r.created_at = "2026-01-01T00:00:00Z";
  return r;
}

}  // namespace zsre::testing

#endif  // ZSRE_TESTS_SUPPORT_TEST_UTIL_H_
