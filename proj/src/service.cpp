#include "tca/service.hpp"

#include "httplib.h"
#include "tca/errors.hpp"
#include "tca/report.hpp"

namespace tca {

using nlohmann::json;

struct AssessmentService::State {
  std::shared_ptr<const VerbTaxonomy> tax;
  std::shared_ptr<const BloomClusterSet> clusters;
  std::shared_ptr<EmbeddingProvider> provider;
  std::unique_ptr<TaxonomicPass> pass;
};

namespace {

HttpResult from_error(const Error& e, const std::string& pass) {
  json body = {{"error", to_string(e.kind())}, {"message", e.what()}};
  if (!pass.empty()) body["pass"] = pass;
  int status = 500;
  switch (e.kind()) {
    case ErrorKind::parse:
      status = 400;
      break;
    case ErrorKind::contract:
    case ErrorKind::lookup:
    case ErrorKind::assignment:
      status = 422;
      break;
    case ErrorKind::transport:
    case ErrorKind::cache_miss:
      status = 502;
      break;
    case ErrorKind::config:
    case ErrorKind::integrity:
      status = 500;
      break;
  }
  if (const auto* c = dynamic_cast<const ContractError*>(&e); c && !c->field().empty()) body["field"] = c->field();
  if (const auto* t = dynamic_cast<const TransportError*>(&e)) {
    body["retryable"] = t->retryable();
    body["attempts"] = t->attempts();
  }
  if (const auto* m = dynamic_cast<const CacheMissError*>(&e)) {
    body["retryable"] = false;
    body["missing"] = m->missing();
  }
  return {status, body};
}

std::string provider_kind_of(const std::string& spec) {
  if (spec.rfind("remote:", 0) == 0) return to_string(ProviderKind::remote_service);
  if (spec.rfind("cache", 0) == 0) return to_string(ProviderKind::cached_file);
  return to_string(ProviderKind::deterministic_test);
}

json parse_body(std::string_view body) {
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON body: ") + e.what());
  }
}

HttpResult not_ready() {
  return {503, {{"error", "unavailable"}, {"message", "taxonomy is still loading"}}};
}

}  // namespace

HttpResult error_result(const std::exception& e) {
  if (const auto* p = dynamic_cast<const PassError*>(&e)) {
    try {
      std::rethrow_exception(p->original());
    } catch (const Error& original) {
      return from_error(original, p->pass());
    } catch (...) {
    }
    return from_error(*p, p->pass());
  }
  if (const auto* err = dynamic_cast<const Error*>(&e)) return from_error(*err, {});
  return {500, {{"error", "internal"}, {"message", e.what()}}};
}

AssessmentService::AssessmentService(Options options) : options_(std::move(options)) {}

AssessmentService::~AssessmentService() = default;

void AssessmentService::load() {
  auto tax = std::make_shared<const VerbTaxonomy>(VerbTaxonomy::load(options_.wordnet_dir));
  auto clusters = std::make_shared<const BloomClusterSet>(BloomClusterSet::load(options_.seed_verbs));
  attach(std::move(tax), std::move(clusters), make_provider(options_.provider, options_.embedding_cache));
}

void AssessmentService::attach(std::shared_ptr<const VerbTaxonomy> tax, std::shared_ptr<const BloomClusterSet> clusters,
                               std::shared_ptr<EmbeddingProvider> provider) {
  auto state = std::make_shared<State>();
  state->tax = std::move(tax);
  state->clusters = std::move(clusters);
  state->provider = std::move(provider);
  state->pass = std::make_unique<TaxonomicPass>(*state->tax, *state->clusters);
  std::lock_guard lock(mutex_);
  state_ = std::move(state);
}

std::shared_ptr<const AssessmentService::State> AssessmentService::state() const {
  std::lock_guard lock(mutex_);
  return state_;
}

bool AssessmentService::ready() const { return state() != nullptr; }

HttpResult AssessmentService::health() const {
  auto s = state();
  json body = {{"status", s ? "ok" : "loading"},
               {"wordnet_loaded", s != nullptr},
               {"provider_kind", s ? to_string(s->provider->kind()) : provider_kind_of(options_.provider)}};
  return {s ? 200 : 503, body};
}

HttpResult AssessmentService::assess(std::string_view body) const {
  auto s = state();
  if (!s) return not_ready();
  try {
    const auto doc = parse_body(body);
    if (!doc.is_object()) throw ParseError("request body must be a JSON object");
    auto field = [&](const char* key) -> const json& {
      auto it = doc.find(key);
      if (it == doc.end()) throw ParseError(std::string("request is missing '") + key + "'");
      return *it;
    };
    const auto receiving = course_from_json(field("receiving"), "receiving");
    const auto sending = course_from_json(field("sending"), "sending");
    const auto config = config_from_json(doc.contains("config") ? doc["config"] : json(), "config");
    const auto result = assess_pair(receiving, sending, config, *s->pass, *s->provider);
    return {200, canonicalize(to_json(result, receiving.course_id, sending.course_id))};
  } catch (const std::exception& e) {
    return error_result(e);
  }
}

HttpResult AssessmentService::classify_verb(std::string_view body) const {
  auto s = state();
  if (!s) return not_ready();
  try {
    const auto doc = parse_body(body);
    if (!doc.is_object() || !doc.contains("verb") || !doc["verb"].is_string()) {
      throw ParseError("request body must be {\"verb\": string}");
    }
    const auto raw = doc["verb"].get<std::string>();
    if (lowercase_word(raw).empty()) throw ContractError("verb is empty", "verb");
    const auto lemma = resolve_verb_lemma(*s->tax, raw);
    if (!lemma) throw AssignmentError("'" + raw + "' has no verb synsets");
    auto out = to_json(s->pass->assign(*lemma));
    out["input"] = raw;
    for (const auto& c : s->clusters->clusters()) {
      if (c.level == out["level"].get<int>()) out["level_name"] = c.name;
    }
    return {200, canonicalize(out)};
  } catch (const std::exception& e) {
    return error_result(e);
  }
}

void mount(httplib::Server& server, const AssessmentService& service, const ServerOptions& options) {
  auto reply = [](httplib::Response& res, const HttpResult& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server.Get("/health", [&service, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, service.health());
  });
  server.Post("/assess", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.assess(req.body));
  });
  server.Post("/classify-verb", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.classify_verb(req.body));
  });
  if (!options.cors_origin.empty()) {
    const auto origin = options.cors_origin;
    server.set_post_routing_handler([origin](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", origin);
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    });
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  }
}

}  // namespace tca
