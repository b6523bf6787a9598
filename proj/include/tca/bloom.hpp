#pragma once

// Taxonomic pass: find the action verbs of a learning outcome, place each
// verb on one of the six Bloom levels, and compare LOs by level.
//
// Verbs listed in the seed file take their cluster's level directly. Any
// other verb goes to the cluster with the largest silhouette width, where the
// distance between two verbs is 1 - wup_max and the neighbouring cluster is
// the closest other cluster by mean distance.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tca/grid.hpp"
#include "tca/wordnet.hpp"

namespace tca {

struct BloomCluster {
  int level = 0;  // 1 = Remember ... 6 = Create
  std::string name;
  std::vector<std::string> seed_verbs;
};

class BloomClusterSet {
 public:
  // Validates levels 1..6 in order, nonempty and pairwise disjoint seed lists.
  // Throws ContractError otherwise.
  explicit BloomClusterSet(std::vector<BloomCluster> clusters);

  // Seed file: '#' comments, one "[<level>] <Name>" header per section, verbs
  // separated by whitespace or commas. Throws ParseError with line numbers.
  static BloomClusterSet parse(std::istream& in);
  static BloomClusterSet load(const std::filesystem::path& path);

  std::span<const BloomCluster> clusters() const { return clusters_; }
  std::optional<int> seed_level(std::string_view lemma) const;
  // Seeds with no verb sense in tax. They are tolerated and skipped in means.
  std::vector<std::string> unresolved_seeds(const VerbTaxonomy& tax) const;

 private:
  std::vector<BloomCluster> clusters_;
  std::map<std::string, int, std::less<>> seed_levels_;
};

struct ClusterAssignment {
  enum class Method { seed, silhouette };

  std::string verb;
  int level = 0;
  Method method = Method::seed;
  // Per cluster, in cluster order; nullopt for clusters whose seeds are all
  // unscorable. Empty for seed assignments.
  std::vector<std::optional<double>> silhouette_scores;
};

const char* to_string(ClusterAssignment::Method method);

// Silhouette assignment against an arbitrary list of clusters. Throws
// ContractError when verb is itself a seed and AssignmentError when it has
// no verb sense or no cluster is scorable. Ties go to the lower level.
ClusterAssignment silhouette_assign(std::string_view verb, std::span<const BloomCluster> clusters,
                                    const VerbTaxonomy& tax);
ClusterAssignment silhouette_assign(std::string_view verb, const BloomClusterSet& clusters, const VerbTaxonomy& tax);

// Seed lookup first, silhouette otherwise.
ClusterAssignment assign_verb(std::string_view verb, const BloomClusterSet& clusters, const VerbTaxonomy& tax);

struct DetectOptions {
  std::vector<std::string> stop_verbs{"be", "have", "do", "use"};
};

// Lemmas of the verbs in an LO, in first-occurrence order without repeats.
// A token counts when it resolves to a verb lemma and either opens a sentence
// or follows "to", "and" or a comma. Throws ContractError on empty text.
std::vector<std::string> detect_verbs(std::string_view lo_text, const VerbTaxonomy& tax,
                                      const DetectOptions& options = {});

struct VerbDiagnostic {
  std::string verb;
  std::optional<ClusterAssignment> assignment;
  std::string skipped_reason;  // set when assignment is empty
};

struct LearningOutcome {
  std::string id;
  std::string text;
  std::vector<std::string> verbs;       // filled by detection
  std::optional<int> level;             // max verb level, once assigned
  std::vector<VerbDiagnostic> diagnostics;
};

// Maximum level over the LO's assignable verbs; nullopt when none assign.
std::optional<int> lo_level(const LearningOutcome& lo, const BloomClusterSet& clusters, const VerbTaxonomy& tax);

// Shares taxonomy and clusters across calls and memoizes verb assignments.
// Safe to use from several threads.
class TaxonomicPass {
 public:
  TaxonomicPass(const VerbTaxonomy& tax, const BloomClusterSet& clusters, DetectOptions options = {});

  const VerbTaxonomy& taxonomy() const { return tax_; }
  const BloomClusterSet& clusters() const { return clusters_; }

  // Memoized assign_verb. Throws AssignmentError for verbs without senses.
  ClusterAssignment assign(std::string_view verb) const;

  // Detects verbs, assigns them, and sets level and diagnostics.
  LearningOutcome classify(LearningOutcome lo) const;

 private:
  struct Memo;

  const VerbTaxonomy& tax_;
  const BloomClusterSet& clusters_;
  DetectOptions options_;
  std::shared_ptr<Memo> memo_;
};

// Taxonomic similarity of two Bloom levels: 1 - |a - b| / 5.
double level_similarity(int a, int b);

// cell[i][j] = level_similarity of receiving[i] and sending[j]. LOs without a
// level get 0.5 and a flag. Throws ContractError on empty lists.
SimilarityGrid taxonomic_grid(std::span<const LearningOutcome> receiving, std::span<const LearningOutcome> sending);

}  // namespace tca
