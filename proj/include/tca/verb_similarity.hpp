#pragma once

// Knowledge-based verb similarity over the WordNet verb taxonomy (path, wup,
// lch, each in first-sense and best-sense form), optional word-vector
// similarity, and the benchmark harness that ranks measures by Pearson r
// against human similarity judgements.

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tca/wordnet.hpp"

namespace tca {

// 1 / (1 + shortest path length).
double sim_path(const VerbTaxonomy& tax, SynsetId a, SynsetId b);
// 2·depth(lcs) / (depth(a) + depth(b)); 0 when both depths are 0.
double sim_wup(const VerbTaxonomy& tax, SynsetId a, SynsetId b);
// −ln(len / (2·max_depth)) with len clamped to at least 1.
double sim_lch(const VerbTaxonomy& tax, SynsetId a, SynsetId b);

struct MeasureId {
  enum class Kind { path, wup, lch, vector };

  Kind kind = Kind::wup;
  bool max_over_senses = false;  // *_max variants
  std::string vectors;           // provider name for Kind::vector

  // Accepts path, wup, lch, path_max, wup_max, lch_max and vector:<name>.
  // Throws ContractError on anything else.
  static MeasureId parse(std::string_view name);
  // The six knowledge-based measures in a fixed order.
  static std::vector<MeasureId> knowledge_measures();

  std::string name() const;
  friend bool operator==(const MeasureId&, const MeasureId&) = default;
};

// Whitespace-separated "word v1 ... vD" lines. D is fixed by the first line.
class WordVectors {
 public:
  static WordVectors parse(std::istream& in, std::string name);
  static WordVectors load(const std::string& path, std::string name);

  const std::string& name() const { return name_; }
  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return table_.size(); }
  // Cosine of the two word vectors; nullopt when either word is missing.
  std::optional<double> similarity(std::string_view a, std::string_view b) const;

 private:
  std::string name_;
  std::size_t dimension_ = 0;
  std::map<std::string, std::vector<double>, std::less<>> table_;
};

// Scores for one verb pair under all six knowledge measures.
struct KnowledgeScores {
  double path = 0, wup = 0, lch = 0;
  double path_max = 0, wup_max = 0, lch_max = 0;

  double get(const MeasureId& m) const;
};

// nullopt when either lemma has no verb senses.
std::optional<KnowledgeScores> knowledge_scores(const VerbTaxonomy& tax, std::string_view v1, std::string_view v2);

// Best-sense wup between two lemmas; nullopt when either is unknown. This is
// the similarity the Bloom clustering is built on.
std::optional<double> wup_max(const VerbTaxonomy& tax, std::string_view v1, std::string_view v2);

// Similarity of two lemmas under one measure. nullopt means unscorable: a
// lemma is absent from the taxonomy, or from the vectors for vector measures
// (or no vectors of that name were supplied).
std::optional<double> verb_sim(const VerbTaxonomy& tax, const MeasureId& measure, std::string_view v1,
                               std::string_view v2, std::span<const WordVectors> vectors = {});

// Sample Pearson correlation. Throws ContractError on length mismatch, fewer
// than two points, or zero variance in either series.
double pearson(std::span<const double> xs, std::span<const double> ys);

struct VerbPairRecord {
  std::string v1;
  std::string v2;
  double gold_score = 0;  // 0..10
};

// SimVerb-style TSV: verb1 TAB verb2 TAB POS TAB score TAB relation. Rows
// whose POS is not "V" are skipped. Throws ParseError with the line number
// for malformed rows and for an empty dataset.
std::vector<VerbPairRecord> parse_verb_pairs(std::istream& in);
std::vector<VerbPairRecord> load_verb_pairs(const std::string& path);

struct MeasureReport {
  struct Row {
    MeasureId measure;
    std::optional<double> r;  // undefined when fewer than two pairs scored
    std::size_t scored = 0;
    double coverage = 0;  // scored / dataset size
  };
  std::vector<Row> rows;               // caller's measure order
  std::optional<MeasureId> best_measure;  // argmax r, first wins ties

  std::string to_table() const;
};

// Throws ContractError on an empty dataset.
MeasureReport evaluate_measures(const VerbTaxonomy& tax, std::span<const VerbPairRecord> dataset,
                                std::span<const MeasureId> measures, std::span<const WordVectors> vectors = {});

}  // namespace tca
