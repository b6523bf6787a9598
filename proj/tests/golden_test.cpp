#include <gtest/gtest.h>

#include "support/golden.hpp"
#include "tca/errors.hpp"

namespace tca {
namespace {

TEST(Golden, PipelineReproducesReferenceScript) {
  const auto expected = testing::golden_expected();
  const auto actual = testing::golden_actual();
  ASSERT_EQ(expected["pairs"].size(), 7u);
  for (auto it = expected["pairs"].begin(); it != expected["pairs"].end(); ++it) {
    ASSERT_TRUE(actual.contains(it.key())) << it.key();
    EXPECT_EQ(actual[it.key()].dump(), it.value().dump()) << it.key();
  }
}

TEST(Golden, AgreementWithSyntheticAnnotations) {
  const auto actual = testing::golden_actual();
  const auto notes = load_annotations(testing::test_data("golden/annotations.csv"));
  std::vector<LabeledDecision> decisions;
  for (auto it = actual.begin(); it != actual.end(); ++it) {
    decisions.push_back({it.key(), parse_verdict(it.value()["decision"].get<std::string>())});
  }
  EXPECT_EQ(format_percent(agreement_hundredths(decisions, notes)), "85.71");
}

}  // namespace
}  // namespace tca
