#pragma once

// Semantic pass: sentence embeddings from a pluggable provider and the
// cosine-similarity grid built from them.

#include <atomic>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tca/bloom.hpp"
#include "tca/grid.hpp"

namespace tca {

class EmbeddingVector {
 public:
  // Throws ContractError for an empty or all-zero vector.
  explicit EmbeddingVector(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t dimension() const { return values_.size(); }
  double norm() const;
  double squared_norm() const { return squared_norm_; }

  // Same vector scaled by factor > 0.
  EmbeddingVector scaled(double factor) const;

 private:
  std::vector<double> values_;
  double squared_norm_ = 0;
};

// dot(a, b) / (|a|·|b|). Throws ContractError on dimension mismatch.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

enum class ProviderKind { remote_service, cached_file, deterministic_test };
const char* to_string(ProviderKind kind);

// Implementations must accept concurrent embed_batch calls.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string name() const = 0;
  virtual ProviderKind kind() const = 0;
  // 0 until known (remote providers learn it from the first response).
  virtual std::size_t dimension() const = 0;
  // One vector per text, same order.
  virtual std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) = 0;
};

// Collapses runs of whitespace to one space and trims the ends.
std::string normalize_text(std::string_view text);

// Bag of hashed word tokens (FNV-1a 64 over lowercase ASCII alphanumeric
// runs, bucket = hash mod 64, +1 per occurrence). Stable across runs and
// platforms, and not semantically meaningful: it exists so the pipeline can
// be exercised without a language model.
class HashingProvider final : public EmbeddingProvider {
 public:
  static constexpr std::size_t kDimension = 64;

  std::string name() const override { return "test"; }
  ProviderKind kind() const override { return ProviderKind::deterministic_test; }
  std::size_t dimension() const override { return kDimension; }
  std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) override;

  // Throws ContractError when text has no tokens.
  static EmbeddingVector embed(std::string_view text);
};

// Append-only store of vectors keyed by SHA-256 of (provider name, normalized
// text). An empty path keeps everything in memory.
//
// File layout, one record per line after a '#' header:
//   <sha256 hex> TAB <dimension> TAB <v1> <v2> ... <vD> TAB <crc32 hex>
// where the CRC-32 covers the line up to the final TAB. Loading a file with a
// bad checksum throws IntegrityError naming the line.
class EmbeddingCache {
 public:
  explicit EmbeddingCache(std::filesystem::path path = {});

  static std::string key(std::string_view provider_name, std::string_view text);

  std::optional<EmbeddingVector> find(std::string_view provider_name, std::string_view text) const;
  void put(std::string_view provider_name, std::string_view text, const EmbeddingVector& vector);
  std::size_t size() const;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, EmbeddingVector> records_;
};

// Serves vectors recorded in a cache under a given provider name; never
// computes new ones. Misses throw CacheMissError listing every missing text.
class CachedFileProvider final : public EmbeddingProvider {
 public:
  CachedFileProvider(std::shared_ptr<const EmbeddingCache> cache, std::string provider_name);

  std::string name() const override { return provider_name_; }
  ProviderKind kind() const override { return ProviderKind::cached_file; }
  std::size_t dimension() const override;
  std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) override;

 private:
  std::shared_ptr<const EmbeddingCache> cache_;
  std::string provider_name_;
};

// JSON over HTTP: POST {"texts": [...]} -> {"vectors": [[...], ...]}. The
// dimension is pinned by the first response. Connection failures and 5xx
// replies are retried; when attempts run out a TransportError is thrown.
class RemoteProvider final : public EmbeddingProvider {
 public:
  struct Options {
    int max_attempts = 2;
    int timeout_seconds = 30;
  };

  // url: http://host[:port][/path]. Throws ConfigError for other schemes.
  explicit RemoteProvider(std::string url, std::string name = "remote");
  RemoteProvider(std::string url, std::string name, Options options);

  std::string name() const override { return name_; }
  ProviderKind kind() const override { return ProviderKind::remote_service; }
  std::size_t dimension() const override { return dimension_.load(); }
  std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) override;

  const std::string& url() const { return url_; }
  // HTTP requests attempted so far.
  std::size_t request_count() const { return requests_.load(); }

 private:
  std::string url_;
  std::string name_;
  Options options_;
  std::string host_;
  int port_ = 80;
  std::string path_;
  std::atomic<std::size_t> dimension_{0};
  std::atomic<std::size_t> requests_{0};
};

// Wraps another provider: hits come from the cache, misses go to the inner
// provider in a single batch and are recorded.
class CachingProvider final : public EmbeddingProvider {
 public:
  CachingProvider(std::shared_ptr<EmbeddingProvider> inner, std::shared_ptr<EmbeddingCache> cache);

  std::string name() const override { return inner_->name(); }
  ProviderKind kind() const override { return inner_->kind(); }
  std::size_t dimension() const override { return inner_->dimension(); }
  std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) override;

  const EmbeddingProvider& inner() const { return *inner_; }

 private:
  std::shared_ptr<EmbeddingProvider> inner_;
  std::shared_ptr<EmbeddingCache> cache_;
};

// cell[i][j] = cosine(embed(receiving[i]), embed(sending[j])). Calls
// embed_batch once per side. Throws ContractError on empty lists or a
// provider returning the wrong number of vectors.
SimilarityGrid semantic_grid(std::span<const LearningOutcome> receiving, std::span<const LearningOutcome> sending,
                             EmbeddingProvider& provider);

}  // namespace tca
