#include <gtest/gtest.h>

#include <random>

#include "support/fake_embedding_server.hpp"
#include "support/fixtures.hpp"
#include "tca/aggregation.hpp"
#include "tca/errors.hpp"

namespace tca {
namespace {

SimilarityGrid grid(GridKind kind, std::vector<std::vector<double>> cells) {
  std::vector<std::string> rows, cols;
  for (std::size_t i = 0; i < cells.size(); ++i) rows.push_back("r" + std::to_string(i + 1));
  for (std::size_t j = 0; j < cells[0].size(); ++j) cols.push_back("s" + std::to_string(j + 1));
  SimilarityGrid g(kind, rows, cols);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t j = 0; j < cells[i].size(); ++j) g.set(i, j, cells[i][j]);
  }
  return g;
}

Course course(const std::string& id, Course::Role role, std::vector<std::string> texts) {
  Course c{id, role, {}};
  for (std::size_t i = 0; i < texts.size(); ++i) {
    c.learning_outcomes.push_back({(role == Course::Role::receiving ? "r" : "s") + std::to_string(i + 1), texts[i], {}, {}, {}});
  }
  return c;
}

TEST(AssessmentConfig, RangeViolationsNameTheField) {
  try {
    AssessmentConfig{120, 0.65, 0.5}.validate();
    FAIL();
  } catch (const ContractError& e) {
    EXPECT_EQ(e.field(), "config.impact");
  }
  try {
    AssessmentConfig{30, 0.65, -0.1}.validate();
    FAIL();
  } catch (const ContractError& e) {
    EXPECT_EQ(e.field(), "config.lo_threshold");
  }
  EXPECT_NO_THROW(AssessmentConfig{}.validate());
}

TEST(FinalGrid, BlendsByImpact) {
  const auto sem = grid(GridKind::semantic, {{0.8, -0.4}});
  const auto tax = grid(GridKind::taxonomic, {{0.6, 0.2}});
  const auto fin = final_grid(sem, tax, 30);
  EXPECT_NEAR(fin.at(0, 0), 0.7 * 0.8 + 0.3 * 0.6, 1e-15);
  EXPECT_DOUBLE_EQ(fin.at(0, 1), 0.0);  // 0.7 * -0.4 + 0.06 < 0 is floored
  EXPECT_DOUBLE_EQ(final_grid(sem, tax, 0).at(0, 0), 0.8);
  EXPECT_DOUBLE_EQ(final_grid(sem, tax, 100).at(0, 0), 0.6);
}

TEST(FinalGrid, RejectsMismatchedIds) {
  const auto sem = grid(GridKind::semantic, {{0.8, 0.4}});
  const auto tax = grid(GridKind::taxonomic, {{0.6}, {0.2}});
  EXPECT_THROW(final_grid(sem, tax, 30), ContractError);
}

TEST(Decide, ThresholdsAndTies) {
  const auto fin = grid(GridKind::final, {{0.7, 0.7, 0.1}, {0.64, 0.2, 0.3}, {0.65, 0.9, 0.9}});
  const auto d = decide(fin, {30, 0.65, 0.5});
  ASSERT_EQ(d.rows.size(), 3u);
  EXPECT_EQ(d.rows[0].best_sending, "s1");  // tie keeps the first column
  EXPECT_TRUE(d.rows[0].matched);
  EXPECT_FALSE(d.rows[1].matched);
  EXPECT_EQ(d.rows[2].best_sending, "s2");
  EXPECT_EQ(d.matched_count, 2u);
  EXPECT_EQ(d.decision, Verdict::yes);
  EXPECT_EQ(d.matched_rows().size(), 2u);
  EXPECT_EQ(decide(fin, {30, 0.65, 0.67}).decision, Verdict::no);
}

TEST(Decide, FractionComparisonIsExact) {
  // 1 of 3 rows matches: 1/3 vs lo_threshold values around it.
  const auto fin = grid(GridKind::final, {{0.9}, {0.1}, {0.1}});
  EXPECT_EQ(decide(fin, {30, 0.65, 0.33}).decision, Verdict::yes);
  EXPECT_EQ(decide(fin, {30, 0.65, 0.333333}).decision, Verdict::yes);
  EXPECT_EQ(decide(fin, {30, 0.65, 0.333334}).decision, Verdict::no);
  EXPECT_EQ(decide(fin, {30, 0.65, 0.0}).decision, Verdict::yes);
  const auto none = grid(GridKind::final, {{0.1}, {0.1}});
  EXPECT_EQ(decide(none, {30, 0.65, 0.0}).decision, Verdict::yes);
  EXPECT_EQ(decide(none, {30, 0.65, 0.01}).decision, Verdict::no);
}

TEST(Decide, NeedsAFinalGrid) {
  EXPECT_THROW(decide(grid(GridKind::semantic, {{0.9}}), {}), ContractError);
}

TEST(Agreement, RoundsHalfUpToHundredths) {
  std::vector<AnnotationRecord> notes;
  std::vector<LabeledDecision> decisions;
  for (int i = 0; i < 7; ++i) {
    notes.push_back({"p" + std::to_string(i), Verdict::yes});
    decisions.push_back({"p" + std::to_string(i), Verdict::yes});
  }
  auto with_misses = [&](int misses) {
    auto d = decisions;
    for (int i = 0; i < misses; ++i) d[static_cast<std::size_t>(i)].decision = Verdict::no;
    return format_percent(agreement_hundredths(d, notes));
  };
  EXPECT_EQ(with_misses(0), "100.00");
  EXPECT_EQ(with_misses(1), "85.71");
  EXPECT_EQ(with_misses(2), "71.43");
  EXPECT_EQ(with_misses(3), "57.14");
  EXPECT_EQ(with_misses(7), "0.00");
  EXPECT_DOUBLE_EQ(agreement(decisions, notes), 100.0);
}

TEST(Agreement, IdSetsMustMatch) {
  const std::vector<AnnotationRecord> notes{{"a", Verdict::yes}, {"b", Verdict::no}};
  const std::vector<LabeledDecision> wrong{{"a", Verdict::yes}, {"c", Verdict::no}};
  const std::vector<LabeledDecision> short_list{{"a", Verdict::yes}};
  EXPECT_THROW(agreement_hundredths(wrong, notes), ContractError);
  EXPECT_THROW(agreement_hundredths(short_list, notes), ContractError);
}

TEST(ParseVerdict, CaseInsensitive) {
  EXPECT_EQ(parse_verdict("YES"), Verdict::yes);
  EXPECT_EQ(parse_verdict("no"), Verdict::no);
  EXPECT_THROW(parse_verdict("maybe"), ContractError);
}

class AssessPair : public ::testing::Test {
 protected:
  TaxonomicPass pass{testing::real_wordnet(), testing::shipped_seeds()};
  HashingProvider provider;
};

TEST_F(AssessPair, DecisionIsRecomputableFromGrids) {
  const auto r = course("R", Course::Role::receiving, {"Design algorithms.", "Explain sorting.", "Test programs."});
  const auto s = course("S", Course::Role::sending, {"Design efficient algorithms.", "Describe data."});
  const AssessmentConfig cfg{30, 0.6, 0.5};
  const auto a = assess_pair(r, s, cfg, pass, provider);
  EXPECT_EQ(a.final.rows(), 3u);
  EXPECT_EQ(a.final.cols(), 2u);
  const auto again = decide(final_grid(a.semantic, a.taxonomic, cfg.impact), cfg);
  EXPECT_EQ(again.decision, a.decision.decision);
  EXPECT_EQ(again.matched_count, a.decision.matched_count);
  EXPECT_EQ(a.receiving[0].level, 6);
}

TEST_F(AssessPair, ReassessMatchesAFreshRun) {
  const auto r = course("R", Course::Role::receiving, {"Design algorithms.", "Explain sorting."});
  const auto s = course("S", Course::Role::sending, {"Design efficient algorithms.", "Explain sorting methods."});
  const auto base = assess_pair(r, s, {}, pass, provider);
  for (double impact : {0.0, 30.0, 55.0}) {
    for (double sim : {0.3, 0.65, 0.9}) {
      const AssessmentConfig cfg{impact, sim, 0.5};
      const auto fresh = assess_pair(r, s, cfg, pass, provider);
      const auto re = reassess(base, cfg);
      EXPECT_EQ(re.final.cells(), fresh.final.cells());
      EXPECT_EQ(re.decision.decision, fresh.decision.decision);
    }
  }
}

TEST_F(AssessPair, RoleMismatchAndEmptyListsAreContractErrors) {
  const auto r = course("R", Course::Role::receiving, {"Design algorithms."});
  const auto s = course("S", Course::Role::sending, {"Design algorithms."});
  try {
    assess_pair(s, r, {}, pass, provider);
    FAIL();
  } catch (const ContractError& e) {
    EXPECT_EQ(e.field(), "receiving.role");
  }
  const Course empty{"E", Course::Role::sending, {}};
  EXPECT_THROW(assess_pair(r, empty, {}, pass, provider), ContractError);
}

TEST_F(AssessPair, ProviderFailureIsTaggedWithThePass) {
  RemoteProvider dead(testing::kDeadEndpoint, "remote", {1, 1});
  const auto r = course("R", Course::Role::receiving, {"Design algorithms."});
  const auto s = course("S", Course::Role::sending, {"Design algorithms."});
  try {
    assess_pair(r, s, {}, pass, dead);
    FAIL();
  } catch (const PassError& e) {
    EXPECT_EQ(e.pass(), "semantic");
    EXPECT_EQ(e.kind(), ErrorKind::transport);
    EXPECT_THROW(std::rethrow_exception(e.original()), TransportError);
  }
}

TEST(Monotonicity, RandomGrids) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> dim(1, 6);
  for (int c = 0; c < 200; ++c) {
    const int m = dim(rng), n = dim(rng);
    std::vector<std::vector<double>> cells(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(n)));
    for (auto& row : cells) {
      for (auto& v : row) v = u(rng);
    }
    const auto fin = grid(GridKind::final, cells);
    const double s1 = u(rng), s2 = u(rng), l1 = u(rng), l2 = u(rng);
    const AssessmentConfig strict{30, std::max(s1, s2), std::min(l1, l2)};
    const AssessmentConfig lenient{30, std::min(s1, s2), std::min(l1, l2)};
    if (decide(fin, strict).decision == Verdict::yes) EXPECT_EQ(decide(fin, lenient).decision, Verdict::yes);
    const AssessmentConfig low_lo{30, s1, std::min(l1, l2)};
    const AssessmentConfig high_lo{30, s1, std::max(l1, l2)};
    if (decide(fin, low_lo).decision == Verdict::no) EXPECT_EQ(decide(fin, high_lo).decision, Verdict::no);
  }
}

}  // namespace
}  // namespace tca
