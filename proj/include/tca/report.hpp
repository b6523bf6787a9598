#pragma once

// Course documents, annotation files, pair manifests, and the JSON / table
// renderings shared by the CLI and the HTTP service.

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "tca/aggregation.hpp"
#include "tca/verb_similarity.hpp"

namespace tca {

// {"course_id": str, "role": "sending"|"receiving",
//  "learning_outcomes": [{"id": str, "text": str}, ...]}
// Wrong JSON types throw ParseError; empty ids, duplicate LO ids and empty
// texts throw ContractError with a field path rooted at `where`.
Course course_from_json(const nlohmann::json& doc, const std::string& where = "course");
nlohmann::json course_to_json(const Course& course);
Course load_course(const std::filesystem::path& path);

// One "pair_id <sep> yes|no" row per line; separators may be comma, tab or
// spaces. '#' starts a comment. Throws ParseError with a line number.
std::vector<AnnotationRecord> parse_annotations(std::istream& in);
std::vector<AnnotationRecord> load_annotations(const std::filesystem::path& path);

// {"pairs": [{"id": str, "receiving": path, "sending": path}, ...]}, with paths
// relative to the manifest's directory.
struct PairManifest {
  struct Entry {
    std::string id;
    std::filesystem::path receiving;
    std::filesystem::path sending;
  };
  std::vector<Entry> pairs;

  static PairManifest load(const std::filesystem::path& path);
};

AssessmentConfig config_from_json(const nlohmann::json& doc, const std::string& where = "config");
nlohmann::json to_json(const AssessmentConfig& config);
nlohmann::json to_json(const SimilarityGrid& grid);
nlohmann::json to_json(const ClusterAssignment& assignment);
nlohmann::json to_json(const LearningOutcome& lo);  // verb diagnostics
nlohmann::json to_json(const CreditDecision& decision);
// Full decision report: config echo, verdict, matches, all three grids and
// per-LO verb diagnostics.
nlohmann::json to_json(const Assessment& assessment, const std::string& receiving_course,
                       const std::string& sending_course);
nlohmann::json to_json(const MeasureReport& report, std::size_t dataset_size);

// Rounds every floating-point number to six decimals (and -0 to 0).
nlohmann::json canonicalize(const nlohmann::json& doc);
// Sorted keys, rounded numbers, no whitespace.
std::string canonical_dump(const nlohmann::json& doc);

std::string to_table(const Assessment& assessment, const std::string& receiving_course,
                     const std::string& sending_course);

// Builds a provider from a CLI/service spec:
//   "test"            deterministic hashing provider
//   "cache[:NAME]"    vectors recorded under NAME (default "remote") in cache_path
//   "remote:URL"      HTTP provider wrapped by the cache (in memory when
//                     cache_path is empty)
// Throws ConfigError for unknown specs or a missing cache file.
std::shared_ptr<EmbeddingProvider> make_provider(const std::string& spec, const std::filesystem::path& cache_path);

}  // namespace tca
