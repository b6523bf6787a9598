#pragma once

// JSON-over-HTTP front end. Handlers are plain functions of the request body
// so they can be exercised without a socket; mount() binds them to httplib.

#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "json.hpp"
#include "tca/aggregation.hpp"

namespace httplib {
class Server;
}

namespace tca {

struct HttpResult {
  int status = 200;
  nlohmann::json body;
};

// Maps an exception onto a status code and an error body:
// 400 malformed input, 422 constraint violation, 502 provider failure, 500 otherwise.
HttpResult error_result(const std::exception& e);

class AssessmentService {
 public:
  struct Options {
    std::filesystem::path wordnet_dir;
    std::filesystem::path seed_verbs;
    std::string provider = "test";
    std::filesystem::path embedding_cache;
  };

  explicit AssessmentService(Options options);
  ~AssessmentService();

  // Reads WordNet and the seed file and builds the provider. Until this
  // returns, /health answers 503 and the other endpoints refuse work.
  void load();
  // Installs already-loaded resources instead (tests, embedding).
  void attach(std::shared_ptr<const VerbTaxonomy> tax, std::shared_ptr<const BloomClusterSet> clusters,
              std::shared_ptr<EmbeddingProvider> provider);
  bool ready() const;

  HttpResult health() const;
  HttpResult assess(std::string_view body) const;
  HttpResult classify_verb(std::string_view body) const;

 private:
  struct State;
  std::shared_ptr<const State> state() const;

  Options options_;
  mutable std::mutex mutex_;
  std::shared_ptr<const State> state_;
};

struct ServerOptions {
  // Value for Access-Control-Allow-Origin; empty disables CORS headers.
  std::string cors_origin;
};

void mount(httplib::Server& server, const AssessmentService& service, const ServerOptions& options = {});

}  // namespace tca
