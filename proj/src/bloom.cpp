#include "tca/bloom.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <mutex>
#include <set>
#include <unordered_map>

#include "tca/errors.hpp"
#include "tca/verb_similarity.hpp"

namespace tca {

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

}  // namespace

BloomClusterSet::BloomClusterSet(std::vector<BloomCluster> clusters) : clusters_(std::move(clusters)) {
  if (clusters_.size() != 6) throw ContractError("expected 6 Bloom clusters, got " + std::to_string(clusters_.size()));
  for (std::size_t i = 0; i < clusters_.size(); ++i) {
    auto& c = clusters_[i];
    if (c.level != static_cast<int>(i) + 1) {
      throw ContractError("cluster levels must be 1..6 in order; found " + std::to_string(c.level) + " at position " +
                          std::to_string(i + 1));
    }
    if (c.seed_verbs.empty()) throw ContractError("cluster " + c.name + " has no seed verbs");
    for (const auto& verb : c.seed_verbs) {
      auto [it, fresh] = seed_levels_.emplace(verb, c.level);
      if (!fresh) {
        throw ContractError("seed verb '" + verb + "' listed in levels " + std::to_string(it->second) + " and " +
                            std::to_string(c.level));
      }
    }
  }
}

BloomClusterSet BloomClusterSet::parse(std::istream& in) {
  std::vector<BloomCluster> clusters;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '[') {
      auto close = text.find(']');
      if (close == std::string::npos) throw ParseError("unterminated section header", line_no);
      BloomCluster cluster;
      try {
        std::size_t used = 0;
        auto level_text = trim(std::string_view(text).substr(1, close - 1));
        cluster.level = std::stoi(level_text, &used);
        if (used != level_text.size()) throw std::invalid_argument(level_text);
      } catch (const std::exception&) {
        throw ParseError("section header needs a numeric level", line_no);
      }
      cluster.name = trim(std::string_view(text).substr(close + 1));
      if (cluster.name.empty()) throw ParseError("section header needs a level name", line_no);
      clusters.push_back(std::move(cluster));
      continue;
    }
    if (clusters.empty()) throw ParseError("verbs before the first section header", line_no);
    std::string word;
    for (char ch : text + ",") {
      if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
        if (!word.empty()) clusters.back().seed_verbs.push_back(lowercase_word(word));
        word.clear();
      } else {
        word += ch;
      }
    }
  }
  if (clusters.empty()) throw ParseError("seed file has no sections");
  return BloomClusterSet(std::move(clusters));
}

BloomClusterSet BloomClusterSet::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open seed-verb file " + path.string());
  return parse(in);
}

std::optional<int> BloomClusterSet::seed_level(std::string_view lemma) const {
  auto it = seed_levels_.find(lemma);
  if (it == seed_levels_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> BloomClusterSet::unresolved_seeds(const VerbTaxonomy& tax) const {
  std::vector<std::string> out;
  for (const auto& c : clusters_) {
    for (const auto& verb : c.seed_verbs) {
      if (!tax.has_lemma(verb)) out.push_back(verb);
    }
  }
  return out;
}

const char* to_string(ClusterAssignment::Method method) {
  return method == ClusterAssignment::Method::seed ? "seed" : "silhouette";
}

ClusterAssignment silhouette_assign(std::string_view verb, std::span<const BloomCluster> clusters,
                                    const VerbTaxonomy& tax) {
  for (const auto& c : clusters) {
    if (std::find(c.seed_verbs.begin(), c.seed_verbs.end(), verb) != c.seed_verbs.end()) {
      throw ContractError("'" + std::string(verb) + "' is a seed verb; silhouette assignment does not apply");
    }
  }
  if (!tax.has_lemma(verb)) throw AssignmentError("'" + std::string(verb) + "' has no verb synsets");

  // Mean distance from the verb to each cluster's scorable seeds.
  std::vector<std::optional<double>> mean_distance(clusters.size());
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    double sum = 0;
    std::size_t n = 0;
    for (const auto& seed : clusters[k].seed_verbs) {
      if (auto sim = wup_max(tax, verb, seed)) {
        sum += 1.0 - *sim;
        ++n;
      }
    }
    if (n > 0) mean_distance[k] = sum / static_cast<double>(n);
  }

  ClusterAssignment result;
  result.verb = std::string(verb);
  result.method = ClusterAssignment::Method::silhouette;
  result.silhouette_scores.resize(clusters.size());
  std::optional<double> best;
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    if (!mean_distance[k]) continue;
    const double a = *mean_distance[k];
    std::optional<double> b;
    for (std::size_t other = 0; other < clusters.size(); ++other) {
      if (other == k || !mean_distance[other]) continue;
      if (!b || *mean_distance[other] < *b) b = mean_distance[other];
    }
    double s = 0.0;
    if (b && std::max(a, *b) > 0) s = (*b - a) / std::max(a, *b);
    result.silhouette_scores[k] = s;
    // Strict comparison keeps the earlier (lower) level on ties.
    if (!best || s > *best) {
      best = s;
      result.level = clusters[k].level;
    }
  }
  if (!best) throw AssignmentError("no cluster has a scorable seed verb for '" + std::string(verb) + "'");
  return result;
}

ClusterAssignment silhouette_assign(std::string_view verb, const BloomClusterSet& clusters, const VerbTaxonomy& tax) {
  return silhouette_assign(verb, clusters.clusters(), tax);
}

ClusterAssignment assign_verb(std::string_view verb, const BloomClusterSet& clusters, const VerbTaxonomy& tax) {
  if (auto level = clusters.seed_level(verb)) {
    ClusterAssignment a;
    a.verb = std::string(verb);
    a.level = *level;
    a.method = ClusterAssignment::Method::seed;
    return a;
  }
  return silhouette_assign(verb, clusters, tax);
}

std::vector<std::string> detect_verbs(std::string_view lo_text, const VerbTaxonomy& tax, const DetectOptions& options) {
  if (std::all_of(lo_text.begin(), lo_text.end(), [](unsigned char c) { return std::isspace(c); })) {
    throw ContractError("cannot detect verbs in empty learning-outcome text", "text");
  }

  // Words and the punctuation marks that matter for the position rule.
  std::vector<std::string> tokens;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) {
      auto w = lowercase_word(word);
      if (!w.empty()) tokens.push_back(std::move(w));
    }
    word.clear();
  };
  for (char ch : lo_text) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      flush();
    } else if (ch == ',' || ch == '.' || ch == ';' || ch == ':' || ch == '!' || ch == '?') {
      flush();
      tokens.emplace_back(1, ch);
    } else {
      word += ch;
    }
  }
  flush();

  auto opens_sentence = [](const std::string& t) { return t == "." || t == ";" || t == ":" || t == "!" || t == "?"; };
  std::vector<std::string> verbs;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& tok = tokens[i];
    if (tok.size() == 1 && std::ispunct(static_cast<unsigned char>(tok[0]))) continue;
    const bool in_position =
        i == 0 || opens_sentence(tokens[i - 1]) || tokens[i - 1] == "to" || tokens[i - 1] == "and" || tokens[i - 1] == ",";
    if (!in_position) continue;
    auto lemma = resolve_verb_lemma(tax, tok);
    if (!lemma) continue;
    if (std::find(options.stop_verbs.begin(), options.stop_verbs.end(), *lemma) != options.stop_verbs.end()) continue;
    if (std::find(verbs.begin(), verbs.end(), *lemma) == verbs.end()) verbs.push_back(*lemma);
  }
  return verbs;
}

std::optional<int> lo_level(const LearningOutcome& lo, const BloomClusterSet& clusters, const VerbTaxonomy& tax) {
  std::optional<int> level;
  for (const auto& verb : lo.verbs) {
    try {
      auto a = assign_verb(verb, clusters, tax);
      level = std::max(level.value_or(a.level), a.level);
    } catch (const AssignmentError&) {
      // unassignable verbs do not contribute
    }
  }
  return level;
}

struct TaxonomicPass::Memo {
  std::shared_mutex mutex;
  // Either an assignment or the reason it failed.
  std::unordered_map<std::string, std::pair<std::optional<ClusterAssignment>, std::string>> entries;
};

TaxonomicPass::TaxonomicPass(const VerbTaxonomy& tax, const BloomClusterSet& clusters, DetectOptions options)
    : tax_(tax), clusters_(clusters), options_(std::move(options)), memo_(std::make_shared<Memo>()) {}

ClusterAssignment TaxonomicPass::assign(std::string_view verb) const {
  const std::string key(verb);
  {
    std::shared_lock lock(memo_->mutex);
    if (auto it = memo_->entries.find(key); it != memo_->entries.end()) {
      if (it->second.first) return *it->second.first;
      throw AssignmentError(it->second.second);
    }
  }
  std::pair<std::optional<ClusterAssignment>, std::string> entry;
  try {
    entry.first = assign_verb(verb, clusters_, tax_);
  } catch (const AssignmentError& e) {
    entry.second = e.what();
  }
  std::unique_lock lock(memo_->mutex);
  // A concurrent caller may have won the race; both computed the same value.
  auto [it, fresh] = memo_->entries.emplace(key, std::move(entry));
  (void)fresh;
  if (it->second.first) return *it->second.first;
  throw AssignmentError(it->second.second);
}

LearningOutcome TaxonomicPass::classify(LearningOutcome lo) const {
  lo.verbs = detect_verbs(lo.text, tax_, options_);
  lo.level.reset();
  lo.diagnostics.clear();
  for (const auto& verb : lo.verbs) {
    VerbDiagnostic diag;
    diag.verb = verb;
    try {
      diag.assignment = assign(verb);
      lo.level = std::max(lo.level.value_or(diag.assignment->level), diag.assignment->level);
    } catch (const AssignmentError& e) {
      diag.skipped_reason = std::string("verb skipped: ") + e.what();
    }
    lo.diagnostics.push_back(std::move(diag));
  }
  return lo;
}

double level_similarity(int a, int b) { return 1.0 - std::abs(a - b) / 5.0; }

SimilarityGrid taxonomic_grid(std::span<const LearningOutcome> receiving, std::span<const LearningOutcome> sending) {
  if (receiving.empty() || sending.empty()) throw ContractError("taxonomic grid needs LOs on both sides");
  std::vector<std::string> rows, cols;
  for (const auto& lo : receiving) rows.push_back(lo.id);
  for (const auto& lo : sending) cols.push_back(lo.id);
  SimilarityGrid grid(GridKind::taxonomic, std::move(rows), std::move(cols));
  for (std::size_t i = 0; i < receiving.size(); ++i) {
    for (std::size_t j = 0; j < sending.size(); ++j) {
      if (receiving[i].level && sending[j].level) {
        grid.set(i, j, level_similarity(*receiving[i].level, *sending[j].level));
      } else {
        grid.set(i, j, 0.5);
        grid.flag(i, j);
      }
    }
  }
  return grid;
}

}  // namespace tca
