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

#ifndef ZSRE_EMBEDDING_ENCODER_H_
#define ZSRE_EMBEDDING_ENCODER_H_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace zsre::embedding {

// Dense vector with finite entries.
class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  // Throws kInvalidArgument if any entry is not finite.
  explicit EmbeddingVector(std::vector<double> values);

  size_t dim() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  std::span<const double> values() const { return values_; }
  double operator[](size_t i) const { return values_[i]; }

  bool operator==(const EmbeddingVector&) const = default;

 private:
  std::vector<double> values_;
};

enum class Provider { kRemoteHttp, kDeterministicMock };
enum class Pooling { kClsToken, kMeanTokens };

Provider ParseProvider(const std::string& name);
std::string ProviderName(Provider p);
Pooling ParsePooling(const std::string& name);
std::string PoolingName(Pooling p);

struct EncoderConfig {
  Provider provider = Provider::kDeterministicMock;
  std::string model_id = "bert-base-uncased";
  int dim = 768;
  Pooling pooling = Pooling::kClsToken;
  int batch_size = 32;
  std::optional<std::filesystem::path> cache_path;
  std::string base_url = "http://127.0.0.1:8080";
  std::chrono::milliseconds request_timeout{60000};
  // Seed of the deterministic mock.
  uint64_t seed = 0;

  void Validate() const;
  nlohmann::json ToJson() const;
  static EncoderConfig FromJson(const nlohmann::json& j);
};

// Raw text -> vector backend, without caching.
class Encoder {
 public:
  virtual ~Encoder() = default;
  virtual std::vector<std::vector<double>> Encode(const std::vector<std::string>& texts) = 0;
  virtual bool is_remote() const { return true; }
};

// Offline stand-in for a sentence encoder. Each lowercased word token and
// the whole string map (via SHA-256 and mt19937_64) to a standard Gaussian
// vector; the output is the normalized sum of the token vectors plus half
// the whole-string vector. Texts sharing words therefore have positive
// cosine, unrelated texts are near orthogonal, and distinct strings get
// distinct vectors.
class MockEncoder : public Encoder {
 public:
  MockEncoder(int dim, uint64_t seed) : dim_(dim), seed_(seed) {}
  std::vector<std::vector<double>> Encode(const std::vector<std::string>& texts) override;
  bool is_remote() const override { return false; }

  std::vector<double> EncodeOne(const std::string& text) const;
  // The Gaussian vector for one key, exposed for tests.
  std::vector<double> KeyVector(const std::string& key) const;

 private:
  int dim_;
  uint64_t seed_;
};

// POST {base_url}/embed with {model, pooling, texts} -> {vectors}.
class HttpEncoder : public Encoder {
 public:
  HttpEncoder(std::string base_url, std::string model_id, Pooling pooling,
              std::chrono::milliseconds timeout);
  std::vector<std::vector<double>> Encode(const std::vector<std::string>& texts) override;

 private:
  std::string base_url_;
  std::string model_id_;
  Pooling pooling_;
  std::chrono::milliseconds timeout_;
};

class FunctionEncoder : public Encoder {
 public:
  using Fn = std::function<std::vector<std::vector<double>>(const std::vector<std::string>&)>;
  explicit FunctionEncoder(Fn fn, bool remote = true) : fn_(std::move(fn)), remote_(remote) {}
  std::vector<std::vector<double>> Encode(const std::vector<std::string>& texts) override {
    return fn_(texts);
  }
  bool is_remote() const override { return remote_; }

 private:
  Fn fn_;
  bool remote_;
};

// Counts Encode() calls and texts sent to the wrapped encoder.
class CountingEncoder : public Encoder {
 public:
  explicit CountingEncoder(std::shared_ptr<Encoder> inner) : inner_(std::move(inner)) {}
  std::vector<std::vector<double>> Encode(const std::vector<std::string>& texts) override {
    ++calls_;
    texts_ += texts.size();
    return inner_->Encode(texts);
  }
  bool is_remote() const override { return inner_->is_remote(); }
  uint64_t calls() const { return calls_.load(); }
  uint64_t texts() const { return texts_.load(); }

 private:
  std::shared_ptr<Encoder> inner_;
  std::atomic<uint64_t> calls_{0};
  std::atomic<uint64_t> texts_{0};
};

std::unique_ptr<Encoder> MakeEncoder(const EncoderConfig& cfg);

// Encoder plus a content-addressed cache keyed by (model_id, pooling, text).
//
// Cache file (JSONL, UTF-8): the first line is a header
//   {"format":"zsre-embedding-cache","version":1,"provider":..,"model_id":..,
//    "pooling":..,"dim":..,"seed":..}
// and each following line is {"key": sha256hex, "text": .., "vector": [..]}.
// Doubles are written with round-trip precision.
class Embedder {
 public:
  Embedder(EncoderConfig cfg, std::shared_ptr<Encoder> encoder, bool offline = false);

  // Order-preserving; identical texts get identical vectors. Cache misses
  // are encoded in batches of cfg.batch_size. Throws kEmptyField for an
  // empty text, kDimensionMismatch for a wrong-length result, and
  // kOfflineCacheMiss when offline and the encoder is remote.
  std::vector<EmbeddingVector> Embed(const std::vector<std::string>& texts);
  EmbeddingVector EmbedOne(const std::string& text) { return Embed({text}).front(); }

  // Texts (deduplicated, in first-seen order) that are not cached.
  std::vector<std::string> Missing(const std::vector<std::string>& texts) const;
  bool can_compute() const { return !(offline_ && encoder_->is_remote()); }

  void LoadCache(const std::filesystem::path& path);
  void SaveCache(const std::filesystem::path& path) const;
  // Loads cfg.cache_path if set and present.
  void LoadConfiguredCache();
  void SaveConfiguredCache() const;

  size_t cache_size() const;
  const EncoderConfig& config() const { return cfg_; }
  std::string CacheKey(const std::string& text) const;

 private:
  nlohmann::json Header() const;

  EncoderConfig cfg_;
  std::shared_ptr<Encoder> encoder_;
  bool offline_;
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, EmbeddingVector> cache_;  // key -> vector
  std::unordered_map<std::string, std::string> texts_;      // key -> text
};

// Embeds the normalized label text ("educated_at" -> "educated at") unless
// `raw`. Throws kEmptyField for an empty label.
EmbeddingVector EmbedRelationLabel(Embedder& embedder, const std::string& label, bool raw = false);

}  // namespace zsre::embedding

#endif  // ZSRE_EMBEDDING_ENCODER_H_
