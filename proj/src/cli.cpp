#include "tca/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "httplib.h"
#include "tca/errors.hpp"
#include "tca/report.hpp"
#include "tca/service.hpp"

#ifndef TCA_DATA_DIR
#define TCA_DATA_DIR "data"
#endif

namespace tca {

namespace {

using nlohmann::json;

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

// Fills options of `cmd` that were not given on the command line from an
// INI/TOML file. Keys may use '_' or '-'.
void apply_config_file(CLI::App& cmd, const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) throw ConfigError("cannot open config file " + path);
  for (const auto& item : CLI::ConfigINI().from_file(path)) {
    if (item.name == "++" || item.name == "--") continue;
    std::string name = item.name;
    std::replace(name.begin(), name.end(), '_', '-');
    CLI::Option* op = cmd.get_option_no_throw("--" + name);
    if (op == nullptr || name == "config") {
      throw CLI::ConfigError("unknown setting '" + item.fullname() + "' in " + path);
    }
    if (op->count() > 0) continue;
    op->add_result(item.inputs);
    op->run_callback();
  }
}

struct Common {
  std::string wordnet_dir = env_or("TCA_WORDNET_DIR", std::string(TCA_DATA_DIR) + "/wordnet-3.0");
  std::string seed_verbs = env_or("TCA_SEED_VERBS", std::string(TCA_DATA_DIR) + "/bloom_seeds.txt");
  std::string provider = "test";
  std::string embedding_cache;
  std::string format = "json";

  void add_paths(CLI::App* app) {
    app->add_option("--wordnet-dir", wordnet_dir, "Directory holding index.verb and data.verb")
        ->capture_default_str();
    app->add_option("--seed-verbs", seed_verbs, "Bloom seed-verb file")->capture_default_str();
  }
  void add_provider(CLI::App* app) {
    app->add_option("--provider", provider, "Embedding provider: test, cache[:NAME] or remote:URL")
        ->capture_default_str();
    app->add_option("--embedding-cache", embedding_cache, "Embedding cache file");
  }
  void add_format(CLI::App* app) {
    app->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "table"}))->capture_default_str();
  }

  // TCA_EMBEDDING_ENDPOINT replaces the URL of a remote provider.
  std::string provider_spec() const {
    const auto endpoint = env_or("TCA_EMBEDDING_ENDPOINT", "");
    if (provider == "remote") {
      if (endpoint.empty()) throw ConfigError("provider 'remote' needs remote:URL or TCA_EMBEDDING_ENDPOINT");
      return "remote:" + endpoint;
    }
    if (!endpoint.empty() && provider.rfind("remote:", 0) == 0) return "remote:" + endpoint;
    return provider;
  }
};

struct Resources {
  VerbTaxonomy tax;
  BloomClusterSet clusters;
};

std::unique_ptr<Resources> load_resources(const Common& c) {
  auto tax = VerbTaxonomy::load(c.wordnet_dir);
  auto clusters = BloomClusterSet::load(c.seed_verbs);
  return std::make_unique<Resources>(Resources{std::move(tax), std::move(clusters)});
}

std::vector<double> parse_range(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ContractError(std::string(flag) + ": '" + item + "' is not a number", flag);
    }
  }
  if (out.empty()) throw ContractError(std::string(flag) + ": empty range", flag);
  return out;
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

struct PairInput {
  std::string id;
  Course receiving;
  Course sending;
};

std::vector<PairInput> load_pairs(const std::string& manifest, const std::string& receiving,
                                  const std::string& sending) {
  std::vector<PairInput> out;
  if (!manifest.empty()) {
    for (const auto& e : PairManifest::load(manifest).pairs) {
      out.push_back({e.id, load_course(e.receiving), load_course(e.sending)});
    }
    return out;
  }
  if (receiving.empty() || sending.empty()) {
    throw ContractError("give --receiving and --sending, or --pairs", "receiving");
  }
  auto r = load_course(receiving);
  auto s = load_course(sending);
  out.push_back({r.course_id + "~" + s.course_id, std::move(r), std::move(s)});
  return out;
}

std::vector<LabeledDecision> labeled(const std::vector<PairInput>& pairs, const std::vector<Assessment>& results) {
  std::vector<LabeledDecision> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) out.push_back({pairs[i].id, results[i].decision.decision});
  return out;
}

}  // namespace

int exit_code(const std::exception& e) {
  const auto* err = dynamic_cast<const Error*>(&e);
  if (!err) return kExitInternal;
  switch (err->kind()) {
    case ErrorKind::parse:
    case ErrorKind::contract:
    case ErrorKind::lookup:
    case ErrorKind::assignment:
      return kExitInput;
    case ErrorKind::config:
    case ErrorKind::transport:
    case ErrorKind::cache_miss:
    case ErrorKind::integrity:
      return kExitResource;
  }
  return kExitInternal;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transfer-credit assessment from course learning outcomes", "tca"};
  app.require_subcommand(1);

  Common common;
  AssessmentConfig cfg;
  std::string config_file;
  std::string receiving, sending, pairs_file, annotations_file;

  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--impact", cfg.impact, "Taxonomic share of the final score, percent")
        ->check(CLI::Range(0.0, 100.0))
        ->capture_default_str();
    cmd->add_option("--sim-threshold", cfg.sim_threshold, "Minimum final score for an LO match")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--lo-threshold", cfg.lo_threshold, "Fraction of receiving LOs that must match")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
  };
  auto add_courses = [&](CLI::App* cmd) {
    cmd->add_option("--receiving", receiving, "Receiving course JSON");
    cmd->add_option("--sending", sending, "Sending course JSON");
    cmd->add_option("--pairs", pairs_file, "Manifest of course pairs");
  };

  auto* assess = app.add_subcommand("assess", "Assess one course pair, or every pair in a manifest");
  assess->add_option("--config", config_file, "INI/TOML file with option values (flags win)");
  add_courses(assess);
  add_config(assess);
  common.add_paths(assess);
  common.add_provider(assess);
  common.add_format(assess);
  assess->add_option("--annotations", annotations_file, "Human decisions, to report agreement (with --pairs)");

  std::string impacts = "30", sims = "0.65", los = "0.5";
  auto* sweep = app.add_subcommand("sweep", "Decisions over a grid of parameter settings");
  sweep->add_option("--config", config_file, "INI/TOML file with option values (flags win)");
  sweep->add_option("--pairs", pairs_file, "Manifest of course pairs")->required();
  sweep->add_option("--impact", impacts, "Comma-separated impact values")->capture_default_str();
  sweep->add_option("--sim-threshold", sims, "Comma-separated sim_threshold values")->capture_default_str();
  sweep->add_option("--lo-threshold", los, "Comma-separated lo_threshold values")->capture_default_str();
  sweep->add_option("--annotations", annotations_file, "Human decisions, to add an agreement row");
  common.add_paths(sweep);
  common.add_provider(sweep);
  common.add_format(sweep);

  std::string simverb;
  std::vector<std::string> measure_names;
  std::vector<std::string> vector_specs;
  auto* eval = app.add_subcommand("eval-verbs", "Correlate verb similarity measures with human ratings");
  eval->add_option("--config", config_file, "INI/TOML file with option values (flags win)");
  eval->add_option("--simverb", simverb, "SimVerb-style TSV of rated verb pairs")->required();
  eval->add_option("--measures", measure_names, "Measures (path, wup, lch, *_max, vector:NAME)")->delimiter(',');
  eval->add_option("--vectors", vector_specs, "Word vectors as NAME=PATH");
  common.add_paths(eval);
  common.add_format(eval);

  std::string verb;
  auto* classify = app.add_subcommand("classify-verb", "Show the Bloom level assigned to a verb");
  classify->add_option("verb", verb, "Verb to classify")->required();
  common.add_paths(classify);

  auto* cache = app.add_subcommand("cache", "Manage an embedding cache file");
  cache->require_subcommand(1);
  auto* fill = cache->add_subcommand("fill", "Embed all LO texts of the given courses into the cache");
  add_courses(fill);
  common.add_provider(fill);
  auto* verify = cache->add_subcommand("verify", "Check every cache record's checksum");
  fill->get_option("--embedding-cache")->required();
  verify->add_option("--embedding-cache", common.embedding_cache, "Embedding cache file")->required();

  std::string host = "127.0.0.1", cors_origin;
  int port = std::atoi(env_or("TCA_PORT", "8080").c_str());
  auto* serve = app.add_subcommand("serve", "Run the JSON-over-HTTP service");
  serve->add_option("--config", config_file, "INI/TOML file with option values (flags win)");
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->check(CLI::Range(0, 65535))->capture_default_str();
  serve->add_option("--cors-origin", cors_origin, "Access-Control-Allow-Origin value, e.g. *");
  common.add_paths(serve);
  common.add_provider(serve);

  try {
    app.parse(argc, argv);
    if (!config_file.empty()) apply_config_file(*app.get_subcommands().front(), config_file);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e);
  }

  try {
    if (*assess) {
      cfg.validate();
      auto res = load_resources(common);
      TaxonomicPass pass(res->tax, res->clusters);
      auto provider = make_provider(common.provider_spec(), common.embedding_cache);
      const auto pairs = load_pairs(pairs_file, receiving, sending);
      std::vector<Assessment> results;
      for (const auto& p : pairs) results.push_back(assess_pair(p.receiving, p.sending, cfg, pass, *provider));

      std::optional<std::int64_t> agree;
      if (!annotations_file.empty()) {
        const auto notes = load_annotations(annotations_file);
        agree = agreement_hundredths(labeled(pairs, results), notes);
      }
      if (common.format == "table") {
        for (std::size_t i = 0; i < pairs.size(); ++i) {
          if (pairs.size() > 1) out << "== " << pairs[i].id << "\n";
          out << to_table(results[i], pairs[i].receiving.course_id, pairs[i].sending.course_id);
          if (i + 1 < pairs.size()) out << "\n";
        }
        if (agree) out << "\nagreement: " << format_percent(*agree) << "%\n";
      } else if (pairs_file.empty()) {
        out << canonicalize(to_json(results[0], pairs[0].receiving.course_id, pairs[0].sending.course_id)).dump(2)
            << "\n";
      } else {
        json doc = {{"pairs", json::array()}};
        for (std::size_t i = 0; i < pairs.size(); ++i) {
          auto r = to_json(results[i], pairs[i].receiving.course_id, pairs[i].sending.course_id);
          r["pair_id"] = pairs[i].id;
          doc["pairs"].push_back(std::move(r));
        }
        if (agree) doc["agreement"] = static_cast<double>(*agree) / 100.0;
        out << canonicalize(doc).dump(2) << "\n";
      }
      return kExitOk;
    }

    if (*sweep) {
      const auto impact_values = parse_range(impacts, "impact");
      const auto sim_values = parse_range(sims, "sim_threshold");
      const auto lo_values = parse_range(los, "lo_threshold");
      std::vector<AssessmentConfig> settings;
      for (double i : impact_values) {
        for (double s : sim_values) {
          for (double l : lo_values) {
            AssessmentConfig c{i, s, l};
            c.validate();
            settings.push_back(c);
          }
        }
      }
      auto res = load_resources(common);
      TaxonomicPass pass(res->tax, res->clusters);
      auto provider = make_provider(common.provider_spec(), common.embedding_cache);
      const auto pairs = load_pairs(pairs_file, "", "");
      std::optional<std::vector<AnnotationRecord>> notes;
      if (!annotations_file.empty()) notes = load_annotations(annotations_file);

      // Grids do not depend on the thresholds, so each pair is scored once.
      std::vector<Assessment> base;
      for (const auto& p : pairs) base.push_back(assess_pair(p.receiving, p.sending, settings[0], pass, *provider));
      std::vector<std::vector<Assessment>> columns;
      for (const auto& c : settings) {
        std::vector<Assessment> col;
        for (const auto& b : base) col.push_back(reassess(b, c));
        columns.push_back(std::move(col));
      }

      if (common.format == "table") {
        std::vector<std::string> headers;
        for (const auto& c : settings) {
          headers.push_back("i" + fixed(c.impact, 0) + "/s" + fixed(c.sim_threshold, 2) + "/l" +
                            fixed(c.lo_threshold, 2));
        }
        std::size_t id_width = 9;
        for (const auto& p : pairs) id_width = std::max(id_width, p.id.size());
        out << std::left << std::setw(static_cast<int>(id_width)) << "pair";
        for (const auto& h : headers) out << "  " << std::setw(18) << h;
        out << "\n";
        for (std::size_t p = 0; p < pairs.size(); ++p) {
          out << std::setw(static_cast<int>(id_width)) << pairs[p].id;
          for (const auto& col : columns) {
            const auto& d = col[p].decision;
            out << "  " << std::setw(18)
                << (std::string(to_string(d.decision)) + " " + std::to_string(d.matched_count) + "/" +
                    std::to_string(d.rows.size()));
          }
          out << "\n";
        }
        if (notes) {
          out << std::setw(static_cast<int>(id_width)) << "agreement";
          for (const auto& col : columns) {
            out << "  " << std::setw(18) << (format_percent(agreement_hundredths(labeled(pairs, col), *notes)) + "%");
          }
          out << "\n";
        }
        out << std::right;
      } else {
        json doc = {{"settings", json::array()}};
        for (std::size_t k = 0; k < settings.size(); ++k) {
          json col = to_json(settings[k]);
          col["results"] = json::array();
          for (std::size_t p = 0; p < pairs.size(); ++p) {
            const auto& d = columns[k][p].decision;
            col["results"].push_back({{"pair_id", pairs[p].id},
                                      {"decision", to_string(d.decision)},
                                      {"matched_count", d.matched_count},
                                      {"lo_count", d.rows.size()}});
          }
          if (notes) {
            col["agreement"] = static_cast<double>(agreement_hundredths(labeled(pairs, columns[k]), *notes)) / 100.0;
          }
          doc["settings"].push_back(std::move(col));
        }
        out << canonicalize(doc).dump(2) << "\n";
      }
      return kExitOk;
    }

    if (*eval) {
      const auto tax = VerbTaxonomy::load(common.wordnet_dir);
      const auto dataset = load_verb_pairs(simverb);
      std::vector<WordVectors> vectors;
      for (const auto& spec : vector_specs) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0) throw ContractError("--vectors expects NAME=PATH", "vectors");
        vectors.push_back(WordVectors::load(spec.substr(eq + 1), spec.substr(0, eq)));
      }
      std::vector<MeasureId> measures;
      if (measure_names.empty()) {
        measures = MeasureId::knowledge_measures();
        for (const auto& v : vectors) measures.push_back(MeasureId::parse("vector:" + v.name()));
      } else {
        for (const auto& n : measure_names) measures.push_back(MeasureId::parse(n));
      }
      const auto report = evaluate_measures(tax, dataset, measures, vectors);
      if (common.format == "table") {
        out << report.to_table();
      } else {
        out << canonicalize(to_json(report, dataset.size())).dump(2) << "\n";
      }
      return kExitOk;
    }

    if (*classify) {
      auto res = load_resources(common);
      const auto lemma = resolve_verb_lemma(res->tax, verb);
      if (!lemma) throw AssignmentError("'" + verb + "' has no verb synsets");
      auto doc = to_json(assign_verb(*lemma, res->clusters, res->tax));
      doc["input"] = verb;
      out << canonicalize(doc).dump(2) << "\n";
      return kExitOk;
    }

    if (*fill) {
      const auto spec = common.provider_spec();
      std::shared_ptr<EmbeddingProvider> inner;
      if (spec == "test") {
        inner = std::make_shared<HashingProvider>();
      } else if (spec.rfind("remote:", 0) == 0) {
        inner = std::make_shared<RemoteProvider>(spec.substr(7));
      } else {
        throw ConfigError("cache fill needs provider test or remote:URL, got '" + spec + "'");
      }
      auto store = std::make_shared<EmbeddingCache>(common.embedding_cache);
      CachingProvider provider(inner, store);
      std::vector<std::string> texts;
      for (const auto& p : load_pairs(pairs_file, receiving, sending)) {
        for (const auto* course : {&p.receiving, &p.sending}) {
          for (const auto& lo : course->learning_outcomes) texts.push_back(lo.text);
        }
      }
      provider.embed_batch(texts);
      out << "embedded " << texts.size() << " texts with provider '" << inner->name() << "'; cache holds "
          << store->size() << " records\n";
      return kExitOk;
    }

    if (*verify) {
      if (!std::filesystem::exists(common.embedding_cache)) {
        throw ConfigError("embedding cache not found: " + common.embedding_cache);
      }
      EmbeddingCache store(common.embedding_cache);
      out << "ok: " << store.size() << " records\n";
      return kExitOk;
    }

    if (*serve) {
      AssessmentService service({common.wordnet_dir, common.seed_verbs, common.provider_spec(),
                                 common.embedding_cache});
      httplib::Server server;
      mount(server, service, {cors_origin});
      const int bound = port == 0 ? server.bind_to_any_port(host) : (server.bind_to_port(host, port) ? port : -1);
      if (bound < 0) throw ConfigError("cannot listen on " + host + ":" + std::to_string(port));
      std::thread listener([&] { server.listen_after_bind(); });
      err << "listening on http://" << host << ":" << bound << "\n";
      try {
        service.load();
      } catch (...) {
        server.stop();
        listener.join();
        throw;
      }
      err << "ready\n";
      listener.join();
      return kExitOk;
    }
  } catch (const std::exception& e) {
    const int code = exit_code(e);
    err << (code == kExitInternal ? "internal error: " : "error: ") << e.what() << "\n";
    return code;
  }
  return kExitInternal;
}

}  // namespace tca
