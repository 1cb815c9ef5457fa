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

#ifndef ZSRE_CORPUS_CORPUS_H_
#define ZSRE_CORPUS_CORPUS_H_

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace zsre::corpus {

struct Mention {
  std::string surface;
  int sent_index = 0;
  // Half-open token span within the sentence.
  int start = 0;
  int end = 0;

  bool operator==(const Mention&) const = default;
};

struct Entity {
  int entity_index = 0;
  std::vector<Mention> mentions;
  std::string entity_type;

  // Canonical surface used for side information: the first mention's.
  const std::string& surface() const { return mentions.front().surface; }

  bool operator==(const Entity&) const = default;
};

struct RelationInstance {
  int head_index = 0;
  int tail_index = 0;
  std::string relation_label;

  bool operator==(const RelationInstance&) const = default;
};

struct Document {
  std::string doc_id;
  std::string title;
  std::vector<std::vector<std::string>> sentences;
  std::vector<Entity> entities;
  std::vector<RelationInstance> gold_relations;
  // Source fields that have no place in the model, kept verbatim.
  nlohmann::json metadata = nlohmann::json::object();

  std::string SentenceText(int index) const;

  bool operator==(const Document&) const = default;
};

struct Dataset {
  std::string name;
  std::vector<Document> documents;
  std::set<std::string> label_inventory;

  const Document* FindDocument(const std::string& doc_id) const;

  // Inventory in its canonical (sorted) order.
  std::vector<std::string> OrderedLabels() const {
    return {label_inventory.begin(), label_inventory.end()};
  }

  bool operator==(const Dataset&) const = default;
};

enum class DatasetFormat { kDocredJson, kMenJson };

// Accepts "docred_json" / "docred" and "men_json" / "men".
DatasetFormat ParseDatasetFormat(const std::string& name);
std::string DatasetFormatName(DatasetFormat format);

struct LoadOptions {
  DatasetFormat format = DatasetFormat::kDocredJson;
  // Skip invalid documents instead of failing the whole load.
  bool lenient = false;
  // Optional JSON object mapping relation ids (e.g. "P69") to names.
  std::optional<std::filesystem::path> relation_names;
};

struct ValidationIssue {
  std::string doc_id;
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::string path;
  std::string format;
  size_t documents_total = 0;
  size_t documents_valid = 0;
  size_t entities = 0;
  size_t relations = 0;
  std::set<std::string> labels;
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty(); }
  nlohmann::json ToJson() const;
};

// Throws Error(kFileNotFound | kParse | kSchema). In lenient mode invalid
// documents are skipped and listed in `report` instead.
Dataset LoadDataset(const std::filesystem::path& path, const LoadOptions& options,
                    ValidationReport* report = nullptr);

// Checks every document and collects all issues without throwing on schema
// problems. File and JSON syntax errors still throw.
ValidationReport ValidateDatasetFile(const std::filesystem::path& path,
                                     const LoadOptions& options);

// Returns the invariant violations of one document (empty when valid).
std::vector<ValidationIssue> CheckDocument(const Document& doc);

enum class PairMode { kGoldPairs, kAllOrderedPairs };

std::vector<std::pair<int, int>> EnumerateEntityPairs(const Document& doc, PairMode mode);

// Minimum |sentence index difference| over all head/tail mention pairs.
// Throws Error(kIndex) for an invalid entity index.
int SentenceGap(const Document& doc, int head_index, int tail_index);

}  // namespace zsre::corpus

#endif  // ZSRE_CORPUS_CORPUS_H_
