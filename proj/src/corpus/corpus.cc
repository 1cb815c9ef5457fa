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

#include "corpus/corpus.h"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <map>
#include <unordered_set>

#include "common/error.h"
#include "common/io.h"
#include "common/text.h"

namespace zsre::corpus {
namespace {

using nlohmann::json;

// Thrown inside a single document's parse; converted into a ValidationIssue.
struct FieldError {
  std::string field;
  std::string message;
};

const json& Require(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw FieldError{path + key, "missing field"};
  return *it;
}

int RequireInt(const json& value, const std::string& field) {
  if (!value.is_number_integer()) throw FieldError{field, "expected integer"};
  const auto v = value.get<int64_t>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw FieldError{field, "integer out of range"};
  }
  return static_cast<int>(v);
}

std::string RequireString(const json& value, const std::string& field) {
  if (!value.is_string()) throw FieldError{field, "expected string"};
  return value.get<std::string>();
}

std::vector<std::vector<std::string>> ParseSentences(const json& sents, const std::string& field) {
  if (!sents.is_array()) throw FieldError{field, "expected array of token arrays"};
  std::vector<std::vector<std::string>> out;
  out.reserve(sents.size());
  for (size_t i = 0; i < sents.size(); ++i) {
    const json& s = sents[i];
    const std::string f = field + "[" + std::to_string(i) + "]";
    if (!s.is_array()) throw FieldError{f, "expected array of tokens"};
    std::vector<std::string> tokens;
    tokens.reserve(s.size());
    for (const json& tok : s) tokens.push_back(RequireString(tok, f));
    out.push_back(std::move(tokens));
  }
  return out;
}

json ExtraFields(const json& record, std::initializer_list<const char*> known) {
  json meta = json::object();
  for (auto it = record.begin(); it != record.end(); ++it) {
    if (std::find_if(known.begin(), known.end(),
                     [&](const char* k) { return it.key() == k; }) == known.end()) {
      meta[it.key()] = it.value();
    }
  }
  return meta;
}

std::string MapLabel(const std::string& raw, const std::map<std::string, std::string>& names) {
  auto it = names.find(raw);
  return it == names.end() ? raw : it->second;
}

// DocRED: {"title", "sents", "vertexSet": [[{name, type, sent_id, pos}]],
// "labels": [{h, t, r, evidence}]}. doc_id is "doc_id" or "id" if present,
// otherwise the title.
Document ParseDocred(const json& rec, const std::map<std::string, std::string>& names) {
  if (!rec.is_object()) throw FieldError{"", "document record is not an object"};
  Document doc;
  doc.title = rec.contains("title") ? RequireString(rec["title"], "title") : "";
  if (rec.contains("doc_id")) {
    doc.doc_id = rec["doc_id"].is_string() ? rec["doc_id"].get<std::string>()
                                          : rec["doc_id"].dump();
  } else if (rec.contains("id")) {
    doc.doc_id = rec["id"].is_string() ? rec["id"].get<std::string>() : rec["id"].dump();
  } else {
    doc.doc_id = doc.title;
  }
  doc.sentences = ParseSentences(Require(rec, "sents", ""), "sents");

  const json& vertex_set = Require(rec, "vertexSet", "");
  if (!vertex_set.is_array()) throw FieldError{"vertexSet", "expected array"};
  for (size_t e = 0; e < vertex_set.size(); ++e) {
    const std::string ef = "vertexSet[" + std::to_string(e) + "]";
    const json& cluster = vertex_set[e];
    if (!cluster.is_array()) throw FieldError{ef, "expected array of mentions"};
    Entity entity;
    entity.entity_index = static_cast<int>(e);
    for (size_t m = 0; m < cluster.size(); ++m) {
      const std::string mf = ef + "[" + std::to_string(m) + "]";
      const json& mj = cluster[m];
      if (!mj.is_object()) throw FieldError{mf, "expected mention object"};
      Mention mention;
      mention.surface = RequireString(Require(mj, "name", mf + "."), mf + ".name");
      mention.sent_index = RequireInt(Require(mj, "sent_id", mf + "."), mf + ".sent_id");
      const json& pos = Require(mj, "pos", mf + ".");
      if (!pos.is_array() || pos.size() != 2) throw FieldError{mf + ".pos", "expected [start, end]"};
      mention.start = RequireInt(pos[0], mf + ".pos");
      mention.end = RequireInt(pos[1], mf + ".pos");
      if (m == 0 && mj.contains("type")) entity.entity_type = RequireString(mj["type"], mf + ".type");
      entity.mentions.push_back(std::move(mention));
    }
    doc.entities.push_back(std::move(entity));
  }

  if (rec.contains("labels")) {
    const json& labels = rec["labels"];
    if (!labels.is_array()) throw FieldError{"labels", "expected array"};
    for (size_t i = 0; i < labels.size(); ++i) {
      const std::string lf = "labels[" + std::to_string(i) + "]";
      const json& lj = labels[i];
      if (!lj.is_object()) throw FieldError{lf, "expected object"};
      RelationInstance rel;
      rel.head_index = RequireInt(Require(lj, "h", lf + "."), lf + ".h");
      rel.tail_index = RequireInt(Require(lj, "t", lf + "."), lf + ".t");
      rel.relation_label = MapLabel(RequireString(Require(lj, "r", lf + "."), lf + ".r"), names);
      doc.gold_relations.push_back(std::move(rel));
    }
  }
  doc.metadata = ExtraFields(rec, {"title", "doc_id", "id", "sents", "vertexSet", "labels"});
  return doc;
}

// MEN mapping: {"doc_id", "title", "sentences": [[tokens]],
// "entities": [{"type", "mentions": [{"text", "sent_id", "start", "end"}]}],
// "relations": [{"head", "tail", "label"}]}. Other keys go to metadata.
Document ParseMen(const json& rec, const std::map<std::string, std::string>& names) {
  if (!rec.is_object()) throw FieldError{"", "document record is not an object"};
  Document doc;
  const json& id = Require(rec, "doc_id", "");
  doc.doc_id = id.is_string() ? id.get<std::string>() : id.dump();
  doc.title = rec.contains("title") ? RequireString(rec["title"], "title") : "";
  doc.sentences = ParseSentences(Require(rec, "sentences", ""), "sentences");

  const json& entities = Require(rec, "entities", "");
  if (!entities.is_array()) throw FieldError{"entities", "expected array"};
  for (size_t e = 0; e < entities.size(); ++e) {
    const std::string ef = "entities[" + std::to_string(e) + "]";
    const json& ej = entities[e];
    if (!ej.is_object()) throw FieldError{ef, "expected object"};
    Entity entity;
    entity.entity_index = static_cast<int>(e);
    entity.entity_type = RequireString(Require(ej, "type", ef + "."), ef + ".type");
    const json& mentions = Require(ej, "mentions", ef + ".");
    if (!mentions.is_array()) throw FieldError{ef + ".mentions", "expected array"};
    for (size_t m = 0; m < mentions.size(); ++m) {
      const std::string mf = ef + ".mentions[" + std::to_string(m) + "]";
      const json& mj = mentions[m];
      if (!mj.is_object()) throw FieldError{mf, "expected object"};
      Mention mention;
      mention.surface = RequireString(Require(mj, "text", mf + "."), mf + ".text");
      mention.sent_index = RequireInt(Require(mj, "sent_id", mf + "."), mf + ".sent_id");
      mention.start = RequireInt(Require(mj, "start", mf + "."), mf + ".start");
      mention.end = RequireInt(Require(mj, "end", mf + "."), mf + ".end");
      entity.mentions.push_back(std::move(mention));
    }
    doc.entities.push_back(std::move(entity));
  }

  if (rec.contains("relations")) {
    const json& rels = rec["relations"];
    if (!rels.is_array()) throw FieldError{"relations", "expected array"};
    for (size_t i = 0; i < rels.size(); ++i) {
      const std::string rf = "relations[" + std::to_string(i) + "]";
      const json& rj = rels[i];
      if (!rj.is_object()) throw FieldError{rf, "expected object"};
      RelationInstance rel;
      rel.head_index = RequireInt(Require(rj, "head", rf + "."), rf + ".head");
      rel.tail_index = RequireInt(Require(rj, "tail", rf + "."), rf + ".tail");
      rel.relation_label = MapLabel(RequireString(Require(rj, "label", rf + "."), rf + ".label"), names);
      doc.gold_relations.push_back(std::move(rel));
    }
  }
  doc.metadata = ExtraFields(rec, {"doc_id", "title", "sentences", "entities", "relations"});
  return doc;
}

json ParseJsonFile(const std::filesystem::path& path) {
  const std::string contents = ReadFile(path);
  try {
    return json::parse(contents);
  } catch (const json::parse_error& e) {
    const size_t offset = std::min<size_t>(e.byte, contents.size());
    const size_t line = 1 + std::count(contents.begin(), contents.begin() + offset, '\n');
    throw Error(ErrorCode::kParse, path.string() + ":" + std::to_string(line) +
                                       " (byte " + std::to_string(e.byte) + "): " + e.what());
  }
}

std::map<std::string, std::string> LoadRelationNames(const LoadOptions& options) {
  std::map<std::string, std::string> names;
  if (!options.relation_names) return names;
  const json j = ParseJsonFile(*options.relation_names);
  if (!j.is_object()) {
    throw Error(ErrorCode::kSchema, "relation name map must be a JSON object: " +
                                        options.relation_names->string());
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_string()) {
      throw Error(ErrorCode::kSchema, "relation name for '" + it.key() + "' is not a string");
    }
    names[it.key()] = it.value().get<std::string>();
  }
  return names;
}

struct ParsedFile {
  std::vector<Document> valid;
  ValidationReport report;
};

ParsedFile ParseAndCheck(const std::filesystem::path& path, const LoadOptions& options) {
  const auto names = LoadRelationNames(options);
  const json root = ParseJsonFile(path);
  if (!root.is_array()) {
    throw Error(ErrorCode::kParse, path.string() + ": top level must be an array of documents");
  }
  ParsedFile out;
  out.report.path = path.string();
  out.report.format = DatasetFormatName(options.format);
  out.report.documents_total = root.size();

  std::unordered_set<std::string> seen_ids;
  for (size_t i = 0; i < root.size(); ++i) {
    Document doc;
    try {
      doc = options.format == DatasetFormat::kDocredJson ? ParseDocred(root[i], names)
                                                          : ParseMen(root[i], names);
    } catch (const FieldError& fe) {
      out.report.issues.push_back({"#" + std::to_string(i), fe.field, fe.message});
      continue;
    }
    auto issues = CheckDocument(doc);
    if (!seen_ids.insert(doc.doc_id).second) {
      issues.push_back({doc.doc_id, "doc_id", "duplicate doc_id"});
    }
    if (!issues.empty()) {
      for (auto& issue : issues) out.report.issues.push_back(std::move(issue));
      continue;
    }
    out.report.entities += doc.entities.size();
    out.report.relations += doc.gold_relations.size();
    for (const auto& rel : doc.gold_relations) out.report.labels.insert(rel.relation_label);
    out.valid.push_back(std::move(doc));
  }
  out.report.documents_valid = out.valid.size();
  return out;
}

}  // namespace

std::string Document::SentenceText(int index) const {
  return text::Join(sentences.at(static_cast<size_t>(index)), " ");
}

const Document* Dataset::FindDocument(const std::string& doc_id) const {
  for (const auto& doc : documents) {
    if (doc.doc_id == doc_id) return &doc;
  }
  return nullptr;
}

DatasetFormat ParseDatasetFormat(const std::string& name) {
  if (name == "docred_json" || name == "docred") return DatasetFormat::kDocredJson;
  if (name == "men_json" || name == "men") return DatasetFormat::kMenJson;
  throw Error(ErrorCode::kConfig, "unknown dataset format '" + name + "'");
}

std::string DatasetFormatName(DatasetFormat format) {
  return format == DatasetFormat::kDocredJson ? "docred_json" : "men_json";
}

nlohmann::json ValidationReport::ToJson() const {
  nlohmann::json issues_json = nlohmann::json::array();
  for (const auto& issue : issues) {
    issues_json.push_back({{"doc_id", issue.doc_id}, {"field", issue.field}, {"message", issue.message}});
  }
  return {{"path", path},
          {"format", format},
          {"valid", ok()},
          {"documents_total", documents_total},
          {"documents_valid", documents_valid},
          {"entities", entities},
          {"relations", relations},
          {"labels", std::vector<std::string>(labels.begin(), labels.end())},
          {"issues", issues_json}};
}

std::vector<ValidationIssue> CheckDocument(const Document& doc) {
  std::vector<ValidationIssue> issues;
  auto add = [&](std::string field, std::string message) {
    issues.push_back({doc.doc_id, std::move(field), std::move(message)});
  };
  const int num_sents = static_cast<int>(doc.sentences.size());
  const int num_entities = static_cast<int>(doc.entities.size());
  for (const Entity& entity : doc.entities) {
    const std::string ef = "entities[" + std::to_string(entity.entity_index) + "]";
    if (entity.mentions.empty()) add(ef + ".mentions", "entity has no mentions");
    if (entity.entity_type.empty()) add(ef + ".entity_type", "entity type is empty");
    for (size_t m = 0; m < entity.mentions.size(); ++m) {
      const Mention& mention = entity.mentions[m];
      const std::string mf = ef + ".mentions[" + std::to_string(m) + "]";
      if (mention.sent_index < 0 || mention.sent_index >= num_sents) {
        add(mf + ".sent_index", "sentence index " + std::to_string(mention.sent_index) +
                                    " outside [0, " + std::to_string(num_sents) + ")");
        continue;
      }
      const auto& sentence = doc.sentences[static_cast<size_t>(mention.sent_index)];
      const int len = static_cast<int>(sentence.size());
      if (mention.start < 0 || mention.end > len || mention.start >= mention.end) {
        add(mf + ".token_span", "span [" + std::to_string(mention.start) + ", " +
                                    std::to_string(mention.end) + ") invalid for sentence of " +
                                    std::to_string(len) + " tokens");
        continue;
      }
      std::vector<std::string> span(sentence.begin() + mention.start, sentence.begin() + mention.end);
      if (text::StripWhitespace(text::Join(span, " ")) != text::StripWhitespace(mention.surface)) {
        add(mf + ".surface", "surface '" + mention.surface + "' does not match span text '" +
                                 text::Join(span, " ") + "'");
      }
    }
  }
  for (size_t i = 0; i < doc.gold_relations.size(); ++i) {
    const RelationInstance& rel = doc.gold_relations[i];
    const std::string rf = "gold_relations[" + std::to_string(i) + "]";
    if (rel.head_index < 0 || rel.head_index >= num_entities) add(rf + ".head_index", "out of range");
    if (rel.tail_index < 0 || rel.tail_index >= num_entities) add(rf + ".tail_index", "out of range");
    if (rel.head_index == rel.tail_index) add(rf, "head equals tail");
    if (rel.relation_label.empty()) add(rf + ".relation_label", "empty label");
  }
  return issues;
}

Dataset LoadDataset(const std::filesystem::path& path, const LoadOptions& options,
                    ValidationReport* report) {
  ParsedFile parsed = ParseAndCheck(path, options);
  if (!parsed.report.ok() && !options.lenient) {
    const ValidationIssue& first = parsed.report.issues.front();
    throw Error(ErrorCode::kSchema, "document '" + first.doc_id + "', field '" + first.field +
                                        "': " + first.message);
  }
  Dataset dataset;
  dataset.name = path.stem().string();
  dataset.documents = std::move(parsed.valid);
  dataset.label_inventory = parsed.report.labels;
  if (report != nullptr) *report = std::move(parsed.report);
  return dataset;
}

ValidationReport ValidateDatasetFile(const std::filesystem::path& path, const LoadOptions& options) {
  return ParseAndCheck(path, options).report;
}

std::vector<std::pair<int, int>> EnumerateEntityPairs(const Document& doc, PairMode mode) {
  std::vector<std::pair<int, int>> pairs;
  if (mode == PairMode::kAllOrderedPairs) {
    const int n = static_cast<int>(doc.entities.size());
    pairs.reserve(static_cast<size_t>(n) * static_cast<size_t>(std::max(n - 1, 0)));
    for (int h = 0; h < n; ++h) {
      for (int t = 0; t < n; ++t) {
        if (h != t) pairs.emplace_back(h, t);
      }
    }
    return pairs;
  }
  for (const auto& rel : doc.gold_relations) {
    std::pair<int, int> p{rel.head_index, rel.tail_index};
    if (std::find(pairs.begin(), pairs.end(), p) == pairs.end()) pairs.push_back(p);
  }
  return pairs;
}

int SentenceGap(const Document& doc, int head_index, int tail_index) {
  const int n = static_cast<int>(doc.entities.size());
  if (head_index < 0 || head_index >= n || tail_index < 0 || tail_index >= n) {
    throw Error(ErrorCode::kIndex, "entity index out of range for document '" + doc.doc_id + "'");
  }
  int best = std::numeric_limits<int>::max();
  for (const Mention& m : doc.entities[static_cast<size_t>(head_index)].mentions) {
    for (const Mention& o : doc.entities[static_cast<size_t>(tail_index)].mentions) {
      best = std::min(best, std::abs(m.sent_index - o.sent_index));
    }
  }
  return best;
}

}  // namespace zsre::corpus
