#pragma once

// Aggregation pass: blend the taxonomic and semantic grids, threshold them,
// and turn the count of matched receiving LOs into a credit verdict.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tca/bloom.hpp"
#include "tca/embedding.hpp"
#include "tca/grid.hpp"

namespace tca {

// Leniency knobs. Higher values are stricter.
struct AssessmentConfig {
  double impact = 30.0;         // percent of the final score taken from the taxonomic grid
  double sim_threshold = 0.65;  // minimum final score for an LO pair to match
  double lo_threshold = 0.5;    // fraction of receiving LOs that need a match

  // Throws ContractError whose field() names the offending parameter.
  void validate() const;
};

enum class Verdict { yes, no };
const char* to_string(Verdict v);
Verdict parse_verdict(std::string_view text);  // "yes"/"no", case-insensitive

struct RowMatch {
  std::string receiving;
  std::string best_sending;  // lowest column index among equal maxima
  double score = 0;
  bool matched = false;
};

struct CreditDecision {
  Verdict decision = Verdict::no;
  std::vector<RowMatch> rows;  // one per receiving LO
  std::size_t matched_count = 0;
  double match_fraction = 0;

  std::vector<RowMatch> matched_rows() const;
};

// (1 - impact/100)·semantic + (impact/100)·taxonomic, floored at 0. Throws
// ContractError when the grids disagree on shape or ids.
SimilarityGrid final_grid(const SimilarityGrid& semantic, const SimilarityGrid& taxonomic, double impact);

// A receiving row matches when its maximum reaches sim_threshold. The verdict
// is yes when matched/m reaches lo_threshold, compared exactly on counts with
// lo_threshold taken to six decimals.
CreditDecision decide(const SimilarityGrid& final, const AssessmentConfig& config);

struct Course {
  enum class Role { sending, receiving };

  std::string course_id;
  Role role = Role::sending;
  std::vector<LearningOutcome> learning_outcomes;
};

const char* to_string(Course::Role role);

struct Assessment {
  AssessmentConfig config;
  std::vector<LearningOutcome> receiving;  // classified, with diagnostics
  std::vector<LearningOutcome> sending;
  SimilarityGrid taxonomic;
  SimilarityGrid semantic;
  SimilarityGrid final;
  CreditDecision decision;
};

// Runs the three passes. Errors come back as PassError naming the pass
// ("taxonomic", "semantic" or "aggregation"); a role mismatch or an empty LO
// list is a ContractError.
Assessment assess_pair(const Course& receiving, const Course& sending, const AssessmentConfig& config,
                       const TaxonomicPass& taxonomic, EmbeddingProvider& provider);

// Re-thresholds an existing assessment without recomputing its grids. The
// final grid is rebuilt only when impact changes.
Assessment reassess(const Assessment& base, const AssessmentConfig& config);

struct AnnotationRecord {
  std::string course_pair_id;
  Verdict human_decision = Verdict::no;
};

struct LabeledDecision {
  std::string course_pair_id;
  Verdict decision = Verdict::no;
};

// Percentage of equal verdicts in hundredths of a percent, rounded half up
// (6 of 7 -> 8571). Throws ContractError when the id sets differ.
std::int64_t agreement_hundredths(std::span<const LabeledDecision> decisions,
                                  std::span<const AnnotationRecord> annotations);
double agreement(std::span<const LabeledDecision> decisions, std::span<const AnnotationRecord> annotations);
std::string format_percent(std::int64_t hundredths);  // 8571 -> "85.71"

}  // namespace tca
