#include <gtest/gtest.h>

#include <random>

#include "cmx/core.hpp"
#include "support.hpp"

using namespace cmx;

TEST(ValidatePmf, Examples) {
  EXPECT_TRUE(validate_pmf(std::vector<double>{0.5, 0.5}));
  EXPECT_FALSE(validate_pmf(std::vector<double>{0.5, 0.6}));
  EXPECT_TRUE(validate_pmf(std::vector<double>{1.0}));
}

TEST(ValidatePmf, RejectsNegativeAndNonFiniteAndEmpty) {
  EXPECT_FALSE(validate_pmf(std::vector<double>{1.5, -0.5}));
  EXPECT_FALSE(validate_pmf(std::vector<double>{NAN, 1.0}));
  EXPECT_FALSE(validate_pmf(std::vector<double>{}));
}

TEST(ValidatePmf, ToleranceIsAbsolute1e12) {
  EXPECT_TRUE(validate_pmf(std::vector<double>{0.5, 0.5 + 5e-13}));
  EXPECT_FALSE(validate_pmf(std::vector<double>{0.5, 0.5 + 5e-12}));
}

TEST(ValidatePmf, MisalignedIdsAreInvalid) {
  Probabilities p{{0.5, 0.5}, std::vector<OutcomeId>{1}};
  EXPECT_FALSE(validate_pmf(p));
}

TEST(Counts, ToProbabilitiesPreservesAlignment) {
  Counts c{{2, 1, 1}, 10, std::vector<OutcomeId>{7, 3, 9}};
  const auto p = to_probabilities(c);
  ASSERT_TRUE(p.outcome_ids.has_value());
  EXPECT_EQ(*p.outcome_ids, *c.outcome_ids);
  EXPECT_DOUBLE_EQ(p.values[0], 0.5);
  EXPECT_DOUBLE_EQ(p.values[1], 0.25);
  EXPECT_TRUE(validate_pmf(p));
}

TEST(Counts, EmptyCountsRejected) {
  Counts c{{0, 0}, 2, std::nullopt};
  EXPECT_THROW(to_probabilities(c), EmptyCounts);
}

TEST(StateSpaceSet, ShapeAndAccess) {
  StateSpaceSet s(2, {1, 2, 3, 4, 5, 6});
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(s.dimension(), 2u);
  EXPECT_EQ(s[1][0], 3.0);
  EXPECT_EQ(s[2][1], 6.0);
  EXPECT_THROW(StateSpaceSet(2, {1, 2, 3}), InvalidParameter);
  EXPECT_THROW(StateSpaceSet(0, {}), InvalidParameter);
}

TEST(StateSpaceSet, FromSeriesIsOneDimensional) {
  const auto s = StateSpaceSet::from_series(std::vector<double>{4, 5, 6});
  EXPECT_EQ(s.dimension(), 1u);
  EXPECT_EQ(s.size(), 3u);
}

TEST(Errors, CarryAxisAndDetails) {
  try {
    throw InputTooShort(Axis::Embedding, 5, 2);
  } catch (const Error& e) {
    EXPECT_EQ(e.axis(), Axis::Embedding);
    EXPECT_NE(std::string(e.what()).find("5"), std::string::npos);
  }
  std::vector<double> x{1.0, INFINITY};
  try {
    require_finite(x, Axis::Core);
    FAIL();
  } catch (const NonFiniteInput& e) {
    EXPECT_EQ(e.index(), 1u);
  }
}

TEST(Stats, SampleStdUsesNMinusOne) {
  std::vector<double> x{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(mean(x), 2.5);
  EXPECT_NEAR(sample_std(x), std::sqrt(5.0 / 3.0), 1e-15);
  EXPECT_EQ(sample_std(std::vector<double>{3.0}), 0.0);
}
