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

#include "embedding/encoder.h"

#include <cmath>
#include <fstream>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <unordered_set>

#include "common/error.h"
#include "common/http.h"
#include "common/io.h"
#include "common/text.h"
#include "embedding/prompts.h"

namespace zsre::embedding {
namespace {

constexpr char kCacheFormat[] = "zsre-embedding-cache";
constexpr int kCacheVersion = 1;

uint64_t LeadingWord(const Sha256Digest& digest) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(digest[static_cast<size_t>(i)]) << (8 * i);
  return v;
}

}  // namespace

EmbeddingVector::EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "embedding has a non-finite entry");
  }
}

Provider ParseProvider(const std::string& name) {
  if (name == "remote_http") return Provider::kRemoteHttp;
  if (name == "deterministic_mock") return Provider::kDeterministicMock;
  throw Error(ErrorCode::kConfig, "unknown encoder provider '" + name + "'");
}

std::string ProviderName(Provider p) {
  return p == Provider::kRemoteHttp ? "remote_http" : "deterministic_mock";
}

Pooling ParsePooling(const std::string& name) {
  if (name == "cls_token") return Pooling::kClsToken;
  if (name == "mean_tokens") return Pooling::kMeanTokens;
  throw Error(ErrorCode::kConfig, "unknown pooling '" + name + "'");
}

std::string PoolingName(Pooling p) { return p == Pooling::kClsToken ? "cls_token" : "mean_tokens"; }

void EncoderConfig::Validate() const {
  if (dim <= 0) throw Error(ErrorCode::kConfig, "encoder dim must be > 0");
  if (batch_size < 1) throw Error(ErrorCode::kConfig, "encoder batch_size must be >= 1");
  if (model_id.empty()) throw Error(ErrorCode::kConfig, "encoder model_id must be non-empty");
}

nlohmann::json EncoderConfig::ToJson() const {
  nlohmann::json j = {{"provider", ProviderName(provider)},
                      {"model_id", model_id},
                      {"dim", dim},
                      {"pooling", PoolingName(pooling)},
                      {"batch_size", batch_size},
                      {"base_url", base_url},
                      {"request_timeout_ms", request_timeout.count()},
                      {"seed", seed}};
  j["cache_path"] = cache_path ? nlohmann::json(cache_path->string()) : nlohmann::json(nullptr);
  return j;
}

EncoderConfig EncoderConfig::FromJson(const nlohmann::json& j) {
  EncoderConfig c;
  if (j.contains("provider")) c.provider = ParseProvider(j["provider"].get<std::string>());
  c.model_id = j.value("model_id", c.model_id);
  c.dim = j.value("dim", c.dim);
  if (j.contains("pooling")) c.pooling = ParsePooling(j["pooling"].get<std::string>());
  c.batch_size = j.value("batch_size", c.batch_size);
  c.base_url = j.value("base_url", c.base_url);
  c.request_timeout = std::chrono::milliseconds(j.value("request_timeout_ms", c.request_timeout.count()));
  c.seed = j.value("seed", c.seed);
  if (j.contains("cache_path") && j["cache_path"].is_string()) c.cache_path = j["cache_path"].get<std::string>();
  return c;
}

std::vector<double> MockEncoder::KeyVector(const std::string& key) const {
  std::mt19937_64 engine(LeadingWord(Sha256(key)) ^ seed_);
  constexpr double kUnit = 1.0 / 9007199254740992.0;  // 2^-53
  std::vector<double> v(static_cast<size_t>(dim_));
  for (size_t i = 0; i < v.size(); i += 2) {
    const double u1 = static_cast<double>((engine() >> 11) + 1) * kUnit;  // (0, 1]
    const double u2 = static_cast<double>(engine() >> 11) * kUnit;        // [0, 1)
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    v[i] = r * std::cos(theta);
    if (i + 1 < v.size()) v[i + 1] = r * std::sin(theta);
  }
  return v;
}

std::vector<double> MockEncoder::EncodeOne(const std::string& text) const {
  std::vector<double> acc(static_cast<size_t>(dim_), 0.0);
  for (const std::string& tok : text::WordTokens(text)) {
    const auto v = KeyVector("tok\x1f" + tok);
    for (size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
  }
  const auto whole = KeyVector("txt\x1f" + text);
  for (size_t i = 0; i < acc.size(); ++i) acc[i] += 0.5 * whole[i];
  double norm = 0.0;
  for (double x : acc) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : acc) x /= norm;
  return acc;
}

std::vector<std::vector<double>> MockEncoder::Encode(const std::vector<std::string>& texts) {
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(EncodeOne(t));
  return out;
}

HttpEncoder::HttpEncoder(std::string base_url, std::string model_id, Pooling pooling,
                         std::chrono::milliseconds timeout)
    : base_url_(std::move(base_url)), model_id_(std::move(model_id)), pooling_(pooling), timeout_(timeout) {}

std::vector<std::vector<double>> HttpEncoder::Encode(const std::vector<std::string>& texts) {
  const nlohmann::json body = {{"model", model_id_}, {"pooling", PoolingName(pooling_)}, {"texts", texts}};
  const http::Response resp = http::PostJson(base_url_, "/embed", body.dump(), {}, timeout_);
  if (resp.status != 200) throw ServiceError(resp.status, resp.body, "embed");
  try {
    return nlohmann::json::parse(resp.body).at("vectors").get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ServiceError(resp.status, resp.body, std::string("malformed embed response: ") + e.what());
  }
}

std::unique_ptr<Encoder> MakeEncoder(const EncoderConfig& cfg) {
  cfg.Validate();
  if (cfg.provider == Provider::kDeterministicMock) return std::make_unique<MockEncoder>(cfg.dim, cfg.seed);
  return std::make_unique<HttpEncoder>(cfg.base_url, cfg.model_id, cfg.pooling, cfg.request_timeout);
}

Embedder::Embedder(EncoderConfig cfg, std::shared_ptr<Encoder> encoder, bool offline)
    : cfg_(std::move(cfg)), encoder_(std::move(encoder)), offline_(offline) {
  cfg_.Validate();
}

std::string Embedder::CacheKey(const std::string& text) const {
  std::string material = cfg_.model_id;
  material += '\0';
  material += PoolingName(cfg_.pooling);
  material += '\0';
  material += text;
  return Sha256Hex(material);
}

std::vector<std::string> Embedder::Missing(const std::vector<std::string>& texts) const {
  std::vector<std::string> missing;
  std::unordered_set<std::string> seen;
  std::shared_lock lock(mu_);
  for (const auto& t : texts) {
    const std::string key = CacheKey(t);
    if (!cache_.contains(key) && seen.insert(key).second) missing.push_back(t);
  }
  return missing;
}

std::vector<EmbeddingVector> Embedder::Embed(const std::vector<std::string>& texts) {
  for (const auto& t : texts) {
    if (t.empty()) throw Error(ErrorCode::kEmptyField, "cannot embed an empty text");
  }
  const std::vector<std::string> missing = Missing(texts);
  if (!missing.empty()) {
    if (!can_compute()) {
      throw Error(ErrorCode::kOfflineCacheMiss,
                  "offline mode: " + std::to_string(missing.size()) +
                      " text(s) not in the embedding cache, first: '" + missing.front() + "'");
    }
    const size_t batch = static_cast<size_t>(cfg_.batch_size);
    for (size_t start = 0; start < missing.size(); start += batch) {
      const std::vector<std::string> chunk(missing.begin() + static_cast<std::ptrdiff_t>(start),
                                           missing.begin() + static_cast<std::ptrdiff_t>(std::min(missing.size(), start + batch)));
      auto vectors = encoder_->Encode(chunk);
      if (vectors.size() != chunk.size()) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "encoder returned " + std::to_string(vectors.size()) + " vectors for " +
                        std::to_string(chunk.size()) + " texts");
      }
      std::unique_lock lock(mu_);
      for (size_t i = 0; i < chunk.size(); ++i) {
        if (vectors[i].size() != static_cast<size_t>(cfg_.dim)) {
          throw Error(ErrorCode::kDimensionMismatch,
                      "encoder returned dim " + std::to_string(vectors[i].size()) + ", expected " +
                          std::to_string(cfg_.dim));
        }
        const std::string key = CacheKey(chunk[i]);
        cache_.insert_or_assign(key, EmbeddingVector(std::move(vectors[i])));
        texts_.insert_or_assign(key, chunk[i]);
      }
    }
  }
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  std::shared_lock lock(mu_);
  for (const auto& t : texts) out.push_back(cache_.at(CacheKey(t)));
  return out;
}

nlohmann::json Embedder::Header() const {
  nlohmann::json h = {{"format", kCacheFormat},
                      {"version", kCacheVersion},
                      {"provider", ProviderName(cfg_.provider)},
                      {"model_id", cfg_.model_id},
                      {"pooling", PoolingName(cfg_.pooling)},
                      {"dim", cfg_.dim}};
  // Only the mock's output depends on the seed.
  h["seed"] = cfg_.provider == Provider::kDeterministicMock ? nlohmann::json(cfg_.seed) : nlohmann::json(nullptr);
  return h;
}

void Embedder::LoadCache(const std::filesystem::path& path) {
  const std::string contents = ReadFile(path);
  const auto lines = text::SplitLines(contents);
  if (lines.empty()) return;
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(lines.front());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ":1: " + e.what());
  }
  if (header.value("format", "") != kCacheFormat || header.value("version", 0) != kCacheVersion) {
    throw Error(ErrorCode::kParse, path.string() + ": not a version-1 embedding cache");
  }
  const nlohmann::json expected = Header();
  for (const char* field : {"provider", "model_id", "pooling", "dim", "seed"}) {
    if (header.value(field, nlohmann::json()) != expected[field]) {
      throw Error(ErrorCode::kConfig, path.string() + ": cache was built with " + field + "=" +
                                          header.value(field, nlohmann::json()).dump() +
                                          ", current config has " + expected[field].dump());
    }
  }
  std::unique_lock lock(mu_);
  for (size_t i = 1; i < lines.size(); ++i) {
    if (text::Trim(lines[i]).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(lines[i]);
      auto values = j.at("vector").get<std::vector<double>>();
      if (values.size() != static_cast<size_t>(cfg_.dim)) {
        throw Error(ErrorCode::kDimensionMismatch, path.string() + ":" + std::to_string(i + 1) +
                                                       ": vector has dim " + std::to_string(values.size()));
      }
      const std::string key = j.at("key").get<std::string>();
      cache_.insert_or_assign(key, EmbeddingVector(std::move(values)));
      texts_.insert_or_assign(key, j.value("text", ""));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, path.string() + ":" + std::to_string(i + 1) + ": " + e.what());
    }
  }
}

void Embedder::SaveCache(const std::filesystem::path& path) const {
  std::shared_lock lock(mu_);
  std::vector<std::string> keys;
  keys.reserve(cache_.size());
  for (const auto& [k, v] : cache_) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  std::string out = Header().dump() + "\n";
  for (const auto& k : keys) {
    const auto values = cache_.at(k).values();
    nlohmann::json line = {{"key", k}, {"text", texts_.at(k)},
                           {"vector", std::vector<double>(values.begin(), values.end())}};
    out += line.dump();
    out += '\n';
  }
  WriteFileAtomic(path, out);
}

void Embedder::LoadConfiguredCache() {
  if (cfg_.cache_path && std::filesystem::exists(*cfg_.cache_path)) LoadCache(*cfg_.cache_path);
}

void Embedder::SaveConfiguredCache() const {
  if (cfg_.cache_path) SaveCache(*cfg_.cache_path);
}

size_t Embedder::cache_size() const {
  std::shared_lock lock(mu_);
  return cache_.size();
}

EmbeddingVector EmbedRelationLabel(Embedder& embedder, const std::string& label, bool raw) {
  if (label.empty()) throw Error(ErrorCode::kEmptyField, "relation label is empty");
  return embedder.EmbedOne(raw ? label : NormalizeRelationLabel(label));
}

}  // namespace zsre::embedding
