#pragma once

#include <string>

#include "tca/bloom.hpp"
#include "tca/wordnet.hpp"

namespace tca::testing {

inline std::string test_data(const std::string& rel) { return std::string(TCA_SOURCE_DIR) + "/tests/data/" + rel; }
inline std::string repo_data(const std::string& rel) { return std::string(TCA_SOURCE_DIR) + "/data/" + rel; }
inline std::string ontology_dir(const std::string& name) { return test_data("ontologies/" + name); }

// Loaded once per test binary; both are immutable.
inline const VerbTaxonomy& real_wordnet() {
  static const VerbTaxonomy tax = VerbTaxonomy::load(repo_data("wordnet-3.0"));
  return tax;
}

inline const BloomClusterSet& shipped_seeds() {
  static const BloomClusterSet seeds = BloomClusterSet::load(repo_data("bloom_seeds.txt"));
  return seeds;
}

}  // namespace tca::testing
