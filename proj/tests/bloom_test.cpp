#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "support/brute_force.hpp"
#include "support/fixtures.hpp"
#include "tca/bloom.hpp"
#include "tca/errors.hpp"

namespace tca {
namespace {

using testing::ontology_dir;

BloomClusterSet lattice_clusters() {
  std::istringstream in(
      "[1] Remember\nobserve\n"
      "[2] Understand\nexplain, describe\n"
      "[3] Apply\nteach\n"
      "[4] Analyze\nperceive\n"
      "[5] Evaluate\ncommunicate\n"
      "[6] Create\ndesign compose\n");
  return BloomClusterSet::parse(in);
}

// Reference silhouette: distance 1 - wup_max, a = own cluster mean, b = nearest other.
int exhaustive_level(const VerbTaxonomy& tax, const testing::BruteForceOntology& oracle, const BloomClusterSet& set,
                     const std::string& verb) {
  auto dist = [&](const std::string& x, const std::string& y) {
    double best = 0;
    for (auto a : tax.synsets_of(x)) {
      for (auto b : tax.synsets_of(y)) best = std::max(best, oracle.wup(a.offset, b.offset));
    }
    return 1.0 - best;
  };
  std::vector<double> mean;
  for (const auto& c : set.clusters()) {
    double sum = 0;
    for (const auto& s : c.seed_verbs) sum += dist(verb, s);
    mean.push_back(sum / static_cast<double>(c.seed_verbs.size()));
  }
  int level = 0;
  double best = -2;
  for (std::size_t k = 0; k < mean.size(); ++k) {
    double b = 1e9;
    for (std::size_t j = 0; j < mean.size(); ++j) {
      if (j != k) b = std::min(b, mean[j]);
    }
    const double m = std::max(mean[k], b);
    const double s = m == 0 ? 0 : (b - mean[k]) / m;
    if (s > best) {
      best = s;
      level = set.clusters()[k].level;
    }
  }
  return level;
}

TEST(BloomClusterSet, ParsesShippedSeeds) {
  const auto& set = testing::shipped_seeds();
  ASSERT_EQ(set.clusters().size(), 6u);
  EXPECT_EQ(set.clusters()[0].name, "Remember");
  EXPECT_EQ(set.seed_level("define"), 1);
  EXPECT_EQ(set.seed_level("design"), 6);
  EXPECT_EQ(set.seed_level("construct"), std::nullopt);
  EXPECT_TRUE(set.unresolved_seeds(testing::real_wordnet()).empty());
}

TEST(BloomClusterSet, RejectsBadLayouts) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return BloomClusterSet::parse(in);
  };
  EXPECT_THROW(parse("[1] A\nx\n[2] B\ny\n"), ContractError);  // too few levels
  EXPECT_THROW(parse("[1] A\nx\n[2] B\nx\n[3] C\nz\n[4] D\nw\n[5] E\nv\n[6] F\nu\n"), ContractError);  // shared seed
  EXPECT_THROW(parse("[1] A\n\n[2] B\ny\n[3] C\nz\n[4] D\nw\n[5] E\nv\n[6] F\nu\n"), ContractError);  // empty level
  EXPECT_THROW(parse("stray\n"), ParseError);
}

TEST(AssignVerb, SeedVerbUsesItsOwnLevel) {
  const auto& tax = testing::real_wordnet();
  const auto a = assign_verb("evaluate", testing::shipped_seeds(), tax);
  EXPECT_EQ(a.level, 5);
  EXPECT_EQ(a.method, ClusterAssignment::Method::seed);
  EXPECT_TRUE(a.silhouette_scores.empty());
}

TEST(AssignVerb, SilhouetteRejectsSeedsAndUnknownVerbs) {
  const auto& tax = testing::real_wordnet();
  EXPECT_THROW(silhouette_assign("define", testing::shipped_seeds(), tax), ContractError);
  EXPECT_THROW(assign_verb("xyzzy", testing::shipped_seeds(), tax), AssignmentError);
}

TEST(AssignVerb, MatchesExhaustiveOracleOnLatticeFixture) {
  const auto tax = VerbTaxonomy::load(ontology_dir("lattice"));
  const testing::BruteForceOntology oracle(ontology_dir("lattice"));
  const auto set = lattice_clusters();
  for (const char* verb : {"act", "create", "write", "draft", "summarize", "plan", "see", "instruct"}) {
    const auto a = assign_verb(verb, set, tax);
    EXPECT_EQ(a.method, ClusterAssignment::Method::silhouette);
    EXPECT_EQ(a.level, exhaustive_level(tax, oracle, set, verb)) << verb;
    ASSERT_EQ(a.silhouette_scores.size(), 6u);
    for (const auto& s : a.silhouette_scores) {
      ASSERT_TRUE(s);
      EXPECT_GE(*s, -1.0);
      EXPECT_LE(*s, 1.0);
    }
  }
}

TEST(AssignVerb, MatchesReferenceScriptOnRealWordNet) {
  std::ifstream in(testing::test_data("silhouette_expected.json"));
  const auto expected = nlohmann::json::parse(in);
  ASSERT_EQ(expected.size(), 20u);
  for (auto it = expected.begin(); it != expected.end(); ++it) {
    const auto a = assign_verb(it.key(), testing::shipped_seeds(), testing::real_wordnet());
    EXPECT_EQ(a.level, it.value()["level"].get<int>()) << it.key();
    for (std::size_t k = 0; k < 6; ++k) {
      EXPECT_NEAR(*a.silhouette_scores[k], it.value()["scores"][k].get<double>(), 5e-7) << it.key();
    }
  }
}

TEST(AssignVerb, UnscorableClusterHasNoScore) {
  const auto tax = VerbTaxonomy::load(ontology_dir("lattice"));
  std::istringstream in(
      "[1] A\nobserve\n[2] B\nexplain\n[3] C\nteach\n[4] D\nperceive\n[5] E\nphantom\n[6] F\ndesign\n");
  const auto set = BloomClusterSet::parse(in);
  EXPECT_EQ(set.unresolved_seeds(tax), std::vector<std::string>{"phantom"});
  const auto a = assign_verb("write", set, tax);
  EXPECT_FALSE(a.silhouette_scores[4]);
  EXPECT_NE(a.level, 5);
}

TEST(DetectVerbs, PositionRules) {
  const auto& tax = testing::real_wordnet();
  EXPECT_EQ(detect_verbs("Analyze and evaluate algorithms.", tax), (std::vector<std::string>{"analyze", "evaluate"}));
  EXPECT_EQ(detect_verbs("Students will be able to design circuits; test them.", tax),
            (std::vector<std::string>{"design", "test"}));
  EXPECT_EQ(detect_verbs("Identify, compare and contrast models.", tax),
            (std::vector<std::string>{"identify", "compare", "contrast"}));
  EXPECT_EQ(detect_verbs("Explains and explained results.", tax), std::vector<std::string>{"explain"});
  EXPECT_TRUE(detect_verbs("Familiarity with the periodic table.", tax).empty());
  EXPECT_THROW(detect_verbs("   ", tax), ContractError);
}

TEST(DetectVerbs, StopVerbsAreDropped) {
  const auto& tax = testing::real_wordnet();
  EXPECT_EQ(detect_verbs("Use and apply tools.", tax), std::vector<std::string>{"apply"});
  DetectOptions keep_all{{}};
  EXPECT_EQ(detect_verbs("Use and apply tools.", tax, keep_all), (std::vector<std::string>{"use", "apply"}));
}

TEST(TaxonomicPass, LevelIsTheHighestVerbLevel) {
  const TaxonomicPass pass(testing::real_wordnet(), testing::shipped_seeds());
  const auto lo = pass.classify({"lo1", "Define terms and design experiments.", {}, {}, {}});
  EXPECT_EQ(lo.verbs, (std::vector<std::string>{"define", "design"}));
  EXPECT_EQ(lo.level, 6);
  ASSERT_EQ(lo.diagnostics.size(), 2u);
  EXPECT_EQ(lo.diagnostics[0].assignment->level, 1);
}

TEST(TaxonomicPass, NoVerbsLeavesLevelUnset) {
  const TaxonomicPass pass(testing::real_wordnet(), testing::shipped_seeds());
  const auto lo = pass.classify({"lo1", "Familiarity with the periodic table.", {}, {}, {}});
  EXPECT_FALSE(lo.level);
  EXPECT_TRUE(lo.diagnostics.empty());
}

TEST(TaxonomicPass, ConcurrentAssignmentIsIdempotent) {
  const TaxonomicPass pass(testing::real_wordnet(), testing::shipped_seeds());
  const std::vector<std::string> verbs{"build", "write", "measure", "select", "build", "write"};
  std::vector<std::vector<int>> levels(4);
  std::vector<std::thread> workers;
  for (std::size_t t = 0; t < levels.size(); ++t) {
    workers.emplace_back([&, t] {
      for (const auto& v : verbs) levels[t].push_back(pass.assign(v).level);
    });
  }
  for (auto& w : workers) w.join();
  for (const auto& l : levels) EXPECT_EQ(l, levels[0]);
  EXPECT_EQ(levels[0][0], assign_verb("build", testing::shipped_seeds(), testing::real_wordnet()).level);
}

TEST(TaxonomicGrid, LevelDistanceAndNeutralCells) {
  std::vector<LearningOutcome> rec{{"r1", "x", {}, 1, {}}, {"r2", "y", {}, std::nullopt, {}}};
  std::vector<LearningOutcome> snd{{"s1", "x", {}, 6, {}}, {"s2", "y", {}, 3, {}}};
  const auto g = taxonomic_grid(rec, snd);
  EXPECT_DOUBLE_EQ(g.at(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(g.at(0, 1), 0.6);
  EXPECT_DOUBLE_EQ(g.at(1, 0), 0.5);
  EXPECT_TRUE(g.flagged(1, 1));
  EXPECT_FALSE(g.flagged(0, 1));
  EXPECT_DOUBLE_EQ(level_similarity(4, 4), 1.0);
}

}  // namespace
}  // namespace tca
