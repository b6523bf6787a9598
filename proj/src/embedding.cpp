#include "tca/embedding.hpp"

#include <openssl/evp.h>
#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "httplib.h"
#include "json.hpp"
#include "tca/errors.hpp"

namespace tca {

using nlohmann::json;

EmbeddingVector::EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ContractError("embedding vector is empty");
  for (double v : values_) {
    if (!std::isfinite(v)) throw ContractError("embedding vector has a non-finite component");
    squared_norm_ += v * v;
  }
  if (squared_norm_ == 0) throw ContractError("embedding vector has zero norm");
}

double EmbeddingVector::norm() const { return std::sqrt(squared_norm_); }

EmbeddingVector EmbeddingVector::scaled(double factor) const {
  if (!(factor > 0)) throw ContractError("scale factor must be positive");
  std::vector<double> out(values_);
  for (auto& v : out) v *= factor;
  return EmbeddingVector(std::move(out));
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dimension() != b.dimension()) {
    throw ContractError("cosine of vectors with dimensions " + std::to_string(a.dimension()) + " and " +
                        std::to_string(b.dimension()));
  }
  double dot = 0;
  for (std::size_t i = 0; i < a.dimension(); ++i) dot += a.values()[i] * b.values()[i];
  // sqrt of the product keeps cosine(v, v) at exactly 1.
  return std::clamp(dot / std::sqrt(a.squared_norm() * b.squared_norm()), -1.0, 1.0);
}

const char* to_string(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::remote_service:
      return "remote";
    case ProviderKind::cached_file:
      return "cache";
    case ProviderKind::deterministic_test:
      return "test";
  }
  return "unknown";
}

std::string normalize_text(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out += ' ';
      pending_space = false;
      out += ch;
    }
  }
  return out;
}

// --- deterministic provider -------------------------------------------------

EmbeddingVector HashingProvider::embed(std::string_view text) {
  std::vector<double> values(kDimension, 0.0);
  std::uint64_t hash = 0;
  bool in_token = false;
  auto finish = [&] {
    if (in_token) values[hash % kDimension] += 1.0;
    in_token = false;
  };
  for (char raw : text) {
    const auto ch = static_cast<unsigned char>(raw);
    if (ch < 0x80 && std::isalnum(ch)) {
      if (!in_token) {
        hash = 14695981039346656037ULL;
        in_token = true;
      }
      hash ^= static_cast<unsigned char>(std::tolower(ch));
      hash *= 1099511628211ULL;
    } else {
      finish();
    }
  }
  finish();
  if (std::all_of(values.begin(), values.end(), [](double v) { return v == 0; })) {
    throw ContractError("text has no tokens to embed: \"" + std::string(text) + "\"");
  }
  return EmbeddingVector(std::move(values));
}

std::vector<EmbeddingVector> HashingProvider::embed_batch(std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed(t));
  return out;
}

// --- cache ------------------------------------------------------------------

namespace {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::config, "SHA-256 unavailable");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string crc32_hex(std::string_view data) {
  const auto crc = crc32(0L, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size()));
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc));
  return buf;
}

std::string format_record(const std::string& key, const EmbeddingVector& v) {
  std::string body = key + "\t" + std::to_string(v.dimension()) + "\t";
  char buf[32];
  for (std::size_t i = 0; i < v.dimension(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", v.values()[i]);
    if (i) body += ' ';
    body += buf;
  }
  return body + "\t" + crc32_hex(body) + "\n";
}

constexpr const char* kCacheHeader = "# tca embedding cache v1\n";

}  // namespace

EmbeddingCache::EmbeddingCache(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.empty() || !std::filesystem::exists(path_)) return;
  std::ifstream in(path_, std::ios::binary);
  if (!in) throw ConfigError("cannot read embedding cache " + path_.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto last_tab = line.rfind('\t');
    if (last_tab == std::string::npos) {
      throw IntegrityError("embedding cache " + path_.string() + " line " + std::to_string(line_no) +
                           ": truncated record");
    }
    const std::string body = line.substr(0, last_tab);
    if (crc32_hex(body) != line.substr(last_tab + 1)) {
      throw IntegrityError("embedding cache " + path_.string() + " line " + std::to_string(line_no) +
                           ": checksum mismatch");
    }
    std::istringstream fields(body);
    std::string key;
    std::size_t dim = 0;
    if (!std::getline(fields, key, '\t') || !(fields >> dim)) {
      throw IntegrityError("embedding cache line " + std::to_string(line_no) + ": malformed record");
    }
    std::vector<double> values;
    double v = 0;
    while (fields >> v) values.push_back(v);
    if (values.size() != dim) {
      throw IntegrityError("embedding cache line " + std::to_string(line_no) + ": dimension mismatch");
    }
    records_.insert_or_assign(key, EmbeddingVector(std::move(values)));
  }
}

std::string EmbeddingCache::key(std::string_view provider_name, std::string_view text) {
  std::string material(provider_name);
  material += '\0';
  material += normalize_text(text);
  return sha256_hex(material);
}

std::optional<EmbeddingVector> EmbeddingCache::find(std::string_view provider_name, std::string_view text) const {
  const auto k = key(provider_name, text);
  std::shared_lock lock(mutex_);
  auto it = records_.find(k);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

void EmbeddingCache::put(std::string_view provider_name, std::string_view text, const EmbeddingVector& vector) {
  const auto k = key(provider_name, text);
  std::unique_lock lock(mutex_);
  if (records_.count(k)) return;
  if (!path_.empty()) {
    const bool fresh = !std::filesystem::exists(path_) || std::filesystem::file_size(path_) == 0;
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out) throw ConfigError("cannot write embedding cache " + path_.string());
    if (fresh) out << kCacheHeader;
    out << format_record(k, vector);
    if (!out) throw ConfigError("write to embedding cache " + path_.string() + " failed");
  }
  records_.emplace(k, vector);
}

std::size_t EmbeddingCache::size() const {
  std::shared_lock lock(mutex_);
  return records_.size();
}

// --- cached-file provider ------------------------------------------------------

CachedFileProvider::CachedFileProvider(std::shared_ptr<const EmbeddingCache> cache, std::string provider_name)
    : cache_(std::move(cache)), provider_name_(std::move(provider_name)) {}

std::size_t CachedFileProvider::dimension() const { return 0; }

std::vector<EmbeddingVector> CachedFileProvider::embed_batch(std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out;
  std::vector<std::string> missing;
  for (const auto& t : texts) {
    if (auto v = cache_->find(provider_name_, t)) {
      out.push_back(std::move(*v));
    } else {
      missing.push_back(t);
    }
  }
  if (!missing.empty()) throw CacheMissError(std::move(missing));
  return out;
}

// --- remote provider ------------------------------------------------------------

RemoteProvider::RemoteProvider(std::string url, std::string name) : RemoteProvider(std::move(url), std::move(name), Options{}) {}

RemoteProvider::RemoteProvider(std::string url, std::string name, Options options)
    : url_(std::move(url)), name_(std::move(name)), options_(options) {
  constexpr std::string_view scheme = "http://";
  if (url_.rfind(scheme, 0) != 0) throw ConfigError("embedding endpoint must be an http:// URL: " + url_);
  std::string rest = url_.substr(scheme.size());
  const auto slash = rest.find('/');
  path_ = slash == std::string::npos ? "/" : rest.substr(slash);
  std::string authority = rest.substr(0, slash);
  if (const auto colon = authority.rfind(':'); colon != std::string::npos) {
    try {
      port_ = std::stoi(authority.substr(colon + 1));
    } catch (const std::exception&) {
      throw ConfigError("bad port in embedding endpoint " + url_);
    }
    authority.resize(colon);
  }
  if (authority.empty()) throw ConfigError("embedding endpoint has no host: " + url_);
  host_ = std::move(authority);
}

std::vector<EmbeddingVector> RemoteProvider::embed_batch(std::span<const std::string> texts) {
  if (texts.empty()) return {};
  const std::string body = json{{"texts", std::vector<std::string>(texts.begin(), texts.end())}}.dump();

  httplib::Client client(host_, port_);
  client.set_connection_timeout(options_.timeout_seconds, 0);
  client.set_read_timeout(options_.timeout_seconds, 0);

  std::string last_error;
  for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
    ++requests_;
    auto res = client.Post(path_, body, "application/json");
    if (!res) {
      last_error = "request to " + url_ + " failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "embedding service returned HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw TransportError("embedding service returned HTTP " + std::to_string(res->status), false, attempt);
    }
    json reply;
    try {
      reply = json::parse(res->body);
    } catch (const json::exception& e) {
      throw TransportError(std::string("embedding service sent invalid JSON: ") + e.what(), false, attempt);
    }
    if (!reply.contains("vectors") || !reply["vectors"].is_array() || reply["vectors"].size() != texts.size()) {
      throw TransportError("embedding service reply must hold one vector per text", false, attempt);
    }
    std::vector<EmbeddingVector> out;
    for (std::size_t i = 0; i < texts.size(); ++i) {
      std::vector<double> values;
      try {
        values = reply["vectors"][i].get<std::vector<double>>();
      } catch (const json::exception&) {
        throw TransportError("embedding service vector " + std::to_string(i) + " is not numeric", false, attempt);
      }
      std::size_t expected = 0;
      dimension_.compare_exchange_strong(expected, values.size());
      if (values.size() != dimension_.load()) {
        throw TransportError("embedding service changed dimension from " + std::to_string(dimension_.load()) + " to " +
                                 std::to_string(values.size()),
                             false, attempt);
      }
      try {
        out.emplace_back(std::move(values));
      } catch (const ContractError& e) {
        throw TransportError("embedding for \"" + texts[i] + "\" rejected: " + e.what(), false, attempt);
      }
    }
    return out;
  }
  throw TransportError(last_error, true, options_.max_attempts);
}

// --- caching wrapper ------------------------------------------------------------------

CachingProvider::CachingProvider(std::shared_ptr<EmbeddingProvider> inner, std::shared_ptr<EmbeddingCache> cache)
    : inner_(std::move(inner)), cache_(std::move(cache)) {}

std::vector<EmbeddingVector> CachingProvider::embed_batch(std::span<const std::string> texts) {
  const auto provider = inner_->name();
  std::vector<std::optional<EmbeddingVector>> found(texts.size());
  std::vector<std::string> missing;
  std::vector<std::size_t> missing_at;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    found[i] = cache_->find(provider, texts[i]);
    if (!found[i]) {
      // Identical texts in one batch are fetched once.
      auto same = std::find(missing.begin(), missing.end(), normalize_text(texts[i]));
      if (same == missing.end()) missing.push_back(normalize_text(texts[i]));
      missing_at.push_back(i);
    }
  }
  if (!missing.empty()) {
    auto fetched = inner_->embed_batch(missing);
    if (fetched.size() != missing.size()) throw ContractError("provider returned the wrong number of vectors");
    for (std::size_t k = 0; k < missing.size(); ++k) cache_->put(provider, missing[k], fetched[k]);
    for (auto i : missing_at) {
      auto pos = std::find(missing.begin(), missing.end(), normalize_text(texts[i])) - missing.begin();
      found[i] = fetched[static_cast<std::size_t>(pos)];
    }
  }
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (auto& v : found) out.push_back(std::move(*v));
  return out;
}

// --- grid -------------------------------------------------------------------

SimilarityGrid semantic_grid(std::span<const LearningOutcome> receiving, std::span<const LearningOutcome> sending,
                             EmbeddingProvider& provider) {
  if (receiving.empty() || sending.empty()) throw ContractError("semantic grid needs LOs on both sides");
  std::vector<std::string> rows, cols, row_text, col_text;
  for (const auto& lo : receiving) {
    rows.push_back(lo.id);
    row_text.push_back(lo.text);
  }
  for (const auto& lo : sending) {
    cols.push_back(lo.id);
    col_text.push_back(lo.text);
  }
  const auto row_vecs = provider.embed_batch(row_text);
  const auto col_vecs = provider.embed_batch(col_text);
  if (row_vecs.size() != row_text.size() || col_vecs.size() != col_text.size()) {
    throw ContractError("provider " + provider.name() + " returned the wrong number of vectors");
  }
  SimilarityGrid grid(GridKind::semantic, std::move(rows), std::move(cols));
  for (std::size_t i = 0; i < row_vecs.size(); ++i) {
    for (std::size_t j = 0; j < col_vecs.size(); ++j) grid.set(i, j, cosine(row_vecs[i], col_vecs[j]));
  }
  return grid;
}

}  // namespace tca
