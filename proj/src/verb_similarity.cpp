#include "tca/verb_similarity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "tca/errors.hpp"

namespace tca {

namespace {

double path_from_len(int len) { return 1.0 / (1.0 + len); }

double lch_from_len(int len, int max_depth) {
  const double clamped = std::max(len, 1);
  return -std::log(clamped / (2.0 * max_depth));
}

double wup_from_lcs(const LcsResult& r) {
  const int denom = r.depth_a + r.depth_b;
  if (denom == 0) return 0.0;
  return 2.0 * r.depth_lcs / denom;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

double sim_path(const VerbTaxonomy& tax, SynsetId a, SynsetId b) {
  return path_from_len(tax.shortest_path_len(a, b));
}

double sim_wup(const VerbTaxonomy& tax, SynsetId a, SynsetId b) { return wup_from_lcs(tax.lcs_and_depths(a, b)); }

double sim_lch(const VerbTaxonomy& tax, SynsetId a, SynsetId b) {
  return lch_from_len(tax.shortest_path_len(a, b), tax.max_depth());
}

MeasureId MeasureId::parse(std::string_view name) {
  MeasureId m;
  if (name.rfind("vector:", 0) == 0) {
    m.kind = Kind::vector;
    m.vectors = std::string(name.substr(7));
    if (m.vectors.empty()) throw ContractError("vector measure needs a provider name", "measure");
    return m;
  }
  std::string_view base = name;
  if (base.size() > 4 && base.substr(base.size() - 4) == "_max") {
    m.max_over_senses = true;
    base.remove_suffix(4);
  }
  if (base == "path") {
    m.kind = Kind::path;
  } else if (base == "wup") {
    m.kind = Kind::wup;
  } else if (base == "lch") {
    m.kind = Kind::lch;
  } else {
    throw ContractError("unknown measure '" + std::string(name) + "'", "measure");
  }
  return m;
}

std::vector<MeasureId> MeasureId::knowledge_measures() {
  std::vector<MeasureId> out;
  for (auto name : {"path", "wup", "lch", "path_max", "wup_max", "lch_max"}) out.push_back(parse(name));
  return out;
}

std::string MeasureId::name() const {
  switch (kind) {
    case Kind::path:
      return max_over_senses ? "path_max" : "path";
    case Kind::wup:
      return max_over_senses ? "wup_max" : "wup";
    case Kind::lch:
      return max_over_senses ? "lch_max" : "lch";
    case Kind::vector:
      return "vector:" + vectors;
  }
  return {};
}

WordVectors WordVectors::parse(std::istream& in, std::string name) {
  WordVectors wv;
  wv.name_ = std::move(name);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;
    std::vector<double> values;
    std::string token;
    while (fields >> token) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw ParseError("bad vector component '" + token + "'", line_no);
      }
    }
    if (values.empty()) throw ParseError("word without vector", line_no);
    if (wv.dimension_ == 0) wv.dimension_ = values.size();
    if (values.size() != wv.dimension_) {
      throw ParseError("expected " + std::to_string(wv.dimension_) + " components, got " +
                           std::to_string(values.size()),
                       line_no);
    }
    wv.table_.insert_or_assign(lower(word), std::move(values));
  }
  if (wv.table_.empty()) throw ParseError("empty word-vector file");
  return wv;
}

WordVectors WordVectors::load(const std::string& path, std::string name) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open word-vector file " + path);
  return parse(in, std::move(name));
}

std::optional<double> WordVectors::similarity(std::string_view a, std::string_view b) const {
  auto ia = table_.find(a);
  auto ib = table_.find(b);
  if (ia == table_.end() || ib == table_.end()) return std::nullopt;
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < dimension_; ++i) {
    dot += ia->second[i] * ib->second[i];
    na += ia->second[i] * ia->second[i];
    nb += ib->second[i] * ib->second[i];
  }
  if (na == 0 || nb == 0) return std::nullopt;
  return dot / std::sqrt(na * nb);
}

double KnowledgeScores::get(const MeasureId& m) const {
  switch (m.kind) {
    case MeasureId::Kind::path:
      return m.max_over_senses ? path_max : path;
    case MeasureId::Kind::wup:
      return m.max_over_senses ? wup_max : wup;
    case MeasureId::Kind::lch:
      return m.max_over_senses ? lch_max : lch;
    case MeasureId::Kind::vector:
      break;
  }
  throw ContractError("vector measure has no knowledge score", "measure");
}

std::optional<KnowledgeScores> knowledge_scores(const VerbTaxonomy& tax, std::string_view v1, std::string_view v2) {
  const auto senses1 = tax.synsets_of(lower(v1));
  const auto senses2 = tax.synsets_of(lower(v2));
  if (senses1.empty() || senses2.empty()) return std::nullopt;

  KnowledgeScores s;
  int min_len = std::numeric_limits<int>::max();
  double best_wup = 0.0;
  for (std::size_t i = 0; i < senses1.size(); ++i) {
    const auto lens = tax.shortest_path_lens(senses1[i], senses2);
    for (std::size_t j = 0; j < senses2.size(); ++j) {
      const double wup = wup_from_lcs(tax.lcs_and_depths(senses1[i], senses2[j]));
      if (i == 0 && j == 0) {
        s.path = path_from_len(lens[j]);
        s.lch = lch_from_len(lens[j], tax.max_depth());
        s.wup = wup;
      }
      min_len = std::min(min_len, lens[j]);
      best_wup = std::max(best_wup, wup);
    }
  }
  // path and lch both fall monotonically with length, so their best sense
  // pair is the closest one.
  s.path_max = path_from_len(min_len);
  s.lch_max = lch_from_len(min_len, tax.max_depth());
  s.wup_max = best_wup;
  return s;
}

std::optional<double> wup_max(const VerbTaxonomy& tax, std::string_view v1, std::string_view v2) {
  const auto senses1 = tax.synsets_of(v1);
  const auto senses2 = tax.synsets_of(v2);
  if (senses1.empty() || senses2.empty()) return std::nullopt;
  double best = 0.0;
  for (auto a : senses1) {
    for (auto b : senses2) best = std::max(best, sim_wup(tax, a, b));
  }
  return best;
}

std::optional<double> verb_sim(const VerbTaxonomy& tax, const MeasureId& measure, std::string_view v1,
                               std::string_view v2, std::span<const WordVectors> vectors) {
  if (measure.kind == MeasureId::Kind::vector) {
    for (const auto& wv : vectors) {
      if (wv.name() == measure.vectors) return wv.similarity(lower(v1), lower(v2));
    }
    return std::nullopt;
  }
  const auto senses1 = tax.synsets_of(lower(v1));
  const auto senses2 = tax.synsets_of(lower(v2));
  if (senses1.empty() || senses2.empty()) return std::nullopt;

  auto score = [&](SynsetId a, SynsetId b) {
    switch (measure.kind) {
      case MeasureId::Kind::path:
        return sim_path(tax, a, b);
      case MeasureId::Kind::wup:
        return sim_wup(tax, a, b);
      default:
        return sim_lch(tax, a, b);
    }
  };
  if (!measure.max_over_senses) return score(senses1.front(), senses2.front());
  if (measure.kind == MeasureId::Kind::wup) return wup_max(tax, lower(v1), lower(v2));
  return knowledge_scores(tax, v1, v2)->get(measure);
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw ContractError("pearson: length mismatch");
  if (xs.size() < 2) throw ContractError("pearson: need at least two points");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) throw ContractError("pearson: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<VerbPairRecord> parse_verb_pairs(std::istream& in) {
  std::vector<VerbPairRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      auto tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() < 4) throw ParseError("expected at least 4 tab-separated columns", line_no);
    if (cols[2] != "V") continue;
    VerbPairRecord rec{lower(cols[0]), lower(cols[1]), 0};
    if (rec.v1.empty() || rec.v2.empty()) throw ParseError("empty verb", line_no);
    try {
      std::size_t used = 0;
      rec.gold_score = std::stod(cols[3], &used);
      if (used != cols[3].size()) throw std::invalid_argument(cols[3]);
    } catch (const std::exception&) {
      throw ParseError("bad score '" + cols[3] + "'", line_no);
    }
    if (rec.gold_score < 0 || rec.gold_score > 10) throw ParseError("score outside 0..10", line_no);
    out.push_back(std::move(rec));
  }
  if (out.empty()) throw ParseError("dataset has no verb pairs");
  return out;
}

std::vector<VerbPairRecord> load_verb_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open verb-pair dataset " + path);
  return parse_verb_pairs(in);
}

MeasureReport evaluate_measures(const VerbTaxonomy& tax, std::span<const VerbPairRecord> dataset,
                                std::span<const MeasureId> measures, std::span<const WordVectors> vectors) {
  if (dataset.empty()) throw ContractError("empty dataset");
  const bool need_knowledge = std::any_of(measures.begin(), measures.end(),
                                          [](const MeasureId& m) { return m.kind != MeasureId::Kind::vector; });

  std::vector<std::vector<double>> scores(measures.size());
  std::vector<std::vector<double>> gold(measures.size());
  for (const auto& rec : dataset) {
    std::optional<KnowledgeScores> ks;
    if (need_knowledge) ks = knowledge_scores(tax, rec.v1, rec.v2);
    for (std::size_t m = 0; m < measures.size(); ++m) {
      std::optional<double> s;
      if (measures[m].kind == MeasureId::Kind::vector) {
        s = verb_sim(tax, measures[m], rec.v1, rec.v2, vectors);
      } else if (ks) {
        s = ks->get(measures[m]);
      }
      if (s) {
        scores[m].push_back(*s);
        gold[m].push_back(rec.gold_score);
      }
    }
  }

  MeasureReport report;
  for (std::size_t m = 0; m < measures.size(); ++m) {
    MeasureReport::Row row;
    row.measure = measures[m];
    row.scored = scores[m].size();
    row.coverage = static_cast<double>(row.scored) / static_cast<double>(dataset.size());
    if (row.scored >= 2) {
      try {
        row.r = pearson(scores[m], gold[m]);
      } catch (const ContractError&) {
        row.r.reset();  // constant scores
      }
    }
    report.rows.push_back(std::move(row));
  }
  std::optional<double> best_r;
  for (const auto& row : report.rows) {
    if (row.r && (!best_r || *row.r > *best_r)) {
      best_r = row.r;
      report.best_measure = row.measure;
    }
  }
  return report;
}

std::string MeasureReport::to_table() const {
  std::ostringstream out;
  out << "measure\tr\tcoverage\tscored\n";
  for (const auto& row : rows) {
    out << row.measure.name() << '\t';
    if (row.r) {
      out << std::fixed << std::setprecision(6) << *row.r;
    } else {
      out << "undefined";
    }
    out << '\t' << std::fixed << std::setprecision(6) << row.coverage << '\t' << row.scored << '\n';
  }
  out << "best_measure\t" << (best_measure ? best_measure->name() : std::string("none")) << '\n';
  return out.str();
}

}  // namespace tca
