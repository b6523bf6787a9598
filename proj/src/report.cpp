#include "tca/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "tca/errors.hpp"

namespace tca {

using nlohmann::json;

namespace {

const json& require(const json& doc, const char* key, const std::string& where) {
  if (!doc.is_object()) throw ParseError(where + " must be a JSON object");
  auto it = doc.find(key);
  if (it == doc.end()) throw ParseError(where + "." + key + " is required");
  return *it;
}

std::string require_string(const json& doc, const char* key, const std::string& where) {
  const auto& v = require(doc, key, where);
  if (!v.is_string()) throw ParseError(where + "." + key + " must be a string");
  return v.get<std::string>();
}

json parse_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string fixed(double v, int digits = 6) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

}  // namespace

Course course_from_json(const json& doc, const std::string& where) {
  Course course;
  course.course_id = require_string(doc, "course_id", where);
  if (course.course_id.empty()) throw ContractError(where + ".course_id is empty", where + ".course_id");
  const auto role = require_string(doc, "role", where);
  if (role == "sending") {
    course.role = Course::Role::sending;
  } else if (role == "receiving") {
    course.role = Course::Role::receiving;
  } else {
    throw ContractError(where + ".role must be sending or receiving", where + ".role");
  }
  const auto& los = require(doc, "learning_outcomes", where);
  if (!los.is_array()) throw ParseError(where + ".learning_outcomes must be an array");
  if (los.empty()) {
    throw ContractError(where + " has no learning outcomes", where + ".learning_outcomes");
  }
  std::set<std::string> ids;
  for (std::size_t i = 0; i < los.size(); ++i) {
    const auto path = where + ".learning_outcomes[" + std::to_string(i) + "]";
    LearningOutcome lo;
    lo.id = require_string(los[i], "id", path);
    lo.text = require_string(los[i], "text", path);
    if (lo.id.empty()) throw ContractError(path + ".id is empty", path + ".id");
    if (normalize_text(lo.text).empty()) throw ContractError(path + ".text is empty", path + ".text");
    if (!ids.insert(lo.id).second) throw ContractError("duplicate LO id '" + lo.id + "'", path + ".id");
    course.learning_outcomes.push_back(std::move(lo));
  }
  return course;
}

json course_to_json(const Course& course) {
  json los = json::array();
  for (const auto& lo : course.learning_outcomes) los.push_back({{"id", lo.id}, {"text", lo.text}});
  return {{"course_id", course.course_id}, {"role", to_string(course.role)}, {"learning_outcomes", los}};
}

Course load_course(const std::filesystem::path& path) { return course_from_json(parse_json_file(path), path.string()); }

std::vector<AnnotationRecord> parse_annotations(std::istream& in) {
  std::vector<AnnotationRecord> out;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (auto& c : line) {
      if (c == ',' || c == '\t' || c == '\r') c = ' ';
    }
    std::istringstream fields(line);
    std::string id, verdict, extra;
    if (!(fields >> id)) continue;
    if (!(fields >> verdict) || (fields >> extra)) throw ParseError("expected '<pair id> yes|no'", line_no);
    AnnotationRecord rec;
    rec.course_pair_id = id;
    try {
      rec.human_decision = parse_verdict(verdict);
    } catch (const ContractError& e) {
      throw ParseError(e.what(), line_no);
    }
    if (!ids.insert(id).second) throw ParseError("duplicate course pair id '" + id + "'", line_no);
    out.push_back(std::move(rec));
  }
  if (out.empty()) throw ParseError("annotation file has no rows");
  return out;
}

std::vector<AnnotationRecord> load_annotations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open annotation file " + path.string());
  return parse_annotations(in);
}

PairManifest PairManifest::load(const std::filesystem::path& path) {
  const auto doc = parse_json_file(path);
  const auto base = path.parent_path();
  const auto& pairs = require(doc, "pairs", "manifest");
  if (!pairs.is_array()) throw ParseError("manifest.pairs must be an array");
  if (pairs.empty()) throw ContractError("manifest lists no course pairs", "manifest.pairs");
  PairManifest m;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto where = "manifest.pairs[" + std::to_string(i) + "]";
    Entry e;
    e.id = require_string(pairs[i], "id", where);
    e.receiving = base / require_string(pairs[i], "receiving", where);
    e.sending = base / require_string(pairs[i], "sending", where);
    if (!ids.insert(e.id).second) throw ContractError("duplicate pair id '" + e.id + "'", where + ".id");
    m.pairs.push_back(std::move(e));
  }
  return m;
}

AssessmentConfig config_from_json(const json& doc, const std::string& where) {
  AssessmentConfig cfg;
  if (doc.is_null()) return cfg;
  if (!doc.is_object()) throw ParseError(where + " must be a JSON object");
  auto read = [&](const char* key, double& slot) {
    auto it = doc.find(key);
    if (it == doc.end()) return;
    if (!it->is_number()) throw ParseError(where + "." + key + " must be a number");
    slot = it->get<double>();
  };
  read("impact", cfg.impact);
  read("sim_threshold", cfg.sim_threshold);
  read("lo_threshold", cfg.lo_threshold);
  try {
    cfg.validate();
  } catch (const ContractError& e) {
    // Re-root the field path at `where`.
    const auto& field = e.field();
    const auto dot = field.find('.');
    throw ContractError(e.what(), where + (dot == std::string::npos ? "" : field.substr(dot)));
  }
  return cfg;
}

json to_json(const AssessmentConfig& config) {
  return {{"impact", config.impact}, {"sim_threshold", config.sim_threshold}, {"lo_threshold", config.lo_threshold}};
}

json to_json(const SimilarityGrid& grid) {
  json cells = json::array();
  json flags = json::array();
  for (std::size_t i = 0; i < grid.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < grid.cols(); ++j) {
      row.push_back(grid.at(i, j));
      if (grid.flagged(i, j)) flags.push_back({i, j});
    }
    cells.push_back(std::move(row));
  }
  json out = {{"kind", to_string(grid.kind())}, {"rows", grid.row_ids()}, {"cols", grid.col_ids()}, {"cells", cells}};
  if (!flags.empty()) out["neutral_cells"] = flags;
  return out;
}

json to_json(const ClusterAssignment& a) {
  json scores = json::array();
  for (const auto& s : a.silhouette_scores) scores.push_back(s ? json(*s) : json(nullptr));
  return {{"verb", a.verb}, {"level", a.level}, {"method", to_string(a.method)}, {"silhouette_scores", scores}};
}

json to_json(const LearningOutcome& lo) {
  json verbs = json::array();
  for (const auto& d : lo.diagnostics) {
    if (d.assignment) {
      verbs.push_back(to_json(*d.assignment));
    } else {
      verbs.push_back({{"verb", d.verb}, {"skipped", d.skipped_reason}});
    }
  }
  return {{"id", lo.id}, {"level", lo.level ? json(*lo.level) : json(nullptr)}, {"verbs", verbs}};
}

json to_json(const CreditDecision& decision) {
  json rows = json::array();
  json matched = json::array();
  for (const auto& r : decision.rows) {
    rows.push_back({{"receiving", r.receiving}, {"best_sending", r.best_sending}, {"score", r.score}, {"matched", r.matched}});
    if (r.matched) matched.push_back({{"receiving", r.receiving}, {"sending", r.best_sending}, {"score", r.score}});
  }
  return {{"decision", to_string(decision.decision)},
          {"matched_count", decision.matched_count},
          {"match_fraction", decision.match_fraction},
          {"matched_rows", matched},
          {"rows", rows}};
}

json to_json(const Assessment& a, const std::string& receiving_course, const std::string& sending_course) {
  json out = to_json(a.decision);
  out["config"] = to_json(a.config);
  out["receiving_course"] = receiving_course;
  out["sending_course"] = sending_course;
  out["grids"] = {{"taxonomic", to_json(a.taxonomic)}, {"semantic", to_json(a.semantic)}, {"final", to_json(a.final)}};
  json rec = json::array();
  json snd = json::array();
  for (const auto& lo : a.receiving) rec.push_back(to_json(lo));
  for (const auto& lo : a.sending) snd.push_back(to_json(lo));
  out["diagnostics"] = {{"receiving", rec}, {"sending", snd}};
  return out;
}

json to_json(const MeasureReport& report, std::size_t dataset_size) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"name", row.measure.name()},
                    {"r", row.r ? json(*row.r) : json(nullptr)},
                    {"coverage", row.coverage},
                    {"scored", row.scored}});
  }
  return {{"pairs", dataset_size},
          {"measures", rows},
          {"best_measure", report.best_measure ? json(report.best_measure->name()) : json(nullptr)}};
}

json canonicalize(const json& doc) {
  if (doc.is_number_float()) {
    double v = std::round(doc.get<double>() * 1e6) / 1e6;
    if (v == 0) v = 0;  // drop the sign of -0
    return v;
  }
  if (doc.is_array()) {
    json out = json::array();
    for (const auto& e : doc) out.push_back(canonicalize(e));
    return out;
  }
  if (doc.is_object()) {
    json out = json::object();
    for (auto it = doc.begin(); it != doc.end(); ++it) out[it.key()] = canonicalize(it.value());
    return out;
  }
  return doc;
}

std::string canonical_dump(const json& doc) { return canonicalize(doc).dump(); }

std::string to_table(const Assessment& a, const std::string& receiving_course, const std::string& sending_course) {
  std::ostringstream out;
  out << "receiving " << receiving_course << " vs sending " << sending_course << "\n";
  out << "impact " << fixed(a.config.impact, 2) << "  sim_threshold " << fixed(a.config.sim_threshold, 2)
      << "  lo_threshold " << fixed(a.config.lo_threshold, 2) << "\n\n";

  out << "Bloom levels\n";
  auto levels = [&](const std::vector<LearningOutcome>& los) {
    for (const auto& lo : los) {
      out << "  " << lo.id << "  level " << (lo.level ? std::to_string(*lo.level) : std::string("-")) << "  verbs:";
      for (const auto& d : lo.diagnostics) {
        out << " " << d.verb;
        if (d.assignment) {
          out << "(" << d.assignment->level << "," << to_string(d.assignment->method) << ")";
        } else {
          out << "(skipped)";
        }
      }
      out << "\n";
    }
  };
  levels(a.receiving);
  levels(a.sending);

  out << "\nfinal grid (rows receiving, columns sending)\n        ";
  for (const auto& c : a.final.col_ids()) out << std::setw(10) << c;
  out << "\n";
  for (std::size_t i = 0; i < a.final.rows(); ++i) {
    out << std::setw(8) << a.final.row_ids()[i];
    for (std::size_t j = 0; j < a.final.cols(); ++j) out << std::setw(10) << fixed(a.final.at(i, j), 4);
    out << "\n";
  }
  out << "\nmatches\n";
  for (const auto& r : a.decision.rows) {
    out << "  " << r.receiving << " -> " << r.best_sending << "  " << fixed(r.score, 4)
        << (r.matched ? "  matched" : "  below threshold") << "\n";
  }
  out << "\nmatched " << a.decision.matched_count << "/" << a.decision.rows.size() << " ("
      << fixed(100.0 * a.decision.match_fraction, 2) << "%)\n";
  out << "decision: " << to_string(a.decision.decision) << "\n";
  return out.str();
}

std::shared_ptr<EmbeddingProvider> make_provider(const std::string& spec, const std::filesystem::path& cache_path) {
  if (spec == "test") return std::make_shared<HashingProvider>();
  if (spec == "cache" || spec.rfind("cache:", 0) == 0) {
    if (cache_path.empty()) throw ConfigError("provider 'cache' needs an embedding cache file");
    if (!std::filesystem::exists(cache_path)) throw ConfigError("embedding cache not found: " + cache_path.string());
    const auto name = spec == "cache" ? std::string("remote") : spec.substr(6);
    return std::make_shared<CachedFileProvider>(std::make_shared<EmbeddingCache>(cache_path), name);
  }
  if (spec.rfind("remote:", 0) == 0) {
    auto remote = std::make_shared<RemoteProvider>(spec.substr(7));
    return std::make_shared<CachingProvider>(remote, std::make_shared<EmbeddingCache>(cache_path));
  }
  throw ConfigError("unknown provider '" + spec + "' (expected test, cache[:NAME] or remote:URL)");
}

}  // namespace tca
