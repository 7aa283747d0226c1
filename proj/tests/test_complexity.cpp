#include <gtest/gtest.h>

#include "cmx/complexity.hpp"
#include "support.hpp"

using namespace cmx;

namespace {

std::vector<double> constant(std::size_t n, double c = 1.5) { return std::vector<double>(n, c); }

std::vector<double> as_doubles(const std::string& s) {
  std::vector<double> x;
  for (char c : s) x.push_back(c - '0');
  return x;
}

}  // namespace

TEST(SampleEntropy, MatchesBruteForceCounts) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 50 + rng() % 451;
    const std::size_t m = 1 + rng() % 3;
    const std::size_t tau = 1 + rng() % 2;
    auto x = t % 2 ? test::normal_series(n, rng()) : test::uniform_series(n, rng());
    if (t % 5 == 0)
      for (auto& v : x) v = std::round(v * 4.0);  // ties exercise the inclusive radius
    const double r = 0.2 * sample_std(x);
    const auto fast = sample_entropy_matches(x, m, r, tau);
    const auto slow = test::brute_sample_entropy(x, m, r, tau);
    EXPECT_EQ(fast.a, slow.a);
    EXPECT_EQ(fast.b, slow.b);
    if (slow.a > 0) {
      const double v = complexity(SampleEntropy{m, r, tau}, x).value;
      EXPECT_EQ(v, -std::log(static_cast<double>(slow.a) / static_cast<double>(slow.b)));
    }
  }
}

TEST(SampleEntropy, ConstantSeriesIsZero) {
  EXPECT_EQ(complexity(SampleEntropy{}, constant(100)).value, 0.0);
  EXPECT_EQ(complexity(SampleEntropy{2, 0.1, 1}, constant(100)).value, 0.0);
}

TEST(SampleEntropy, UndefinedWithoutMatches) {
  EXPECT_THROW(complexity(SampleEntropy{2, 0.0, 1}, test::ramp(20)), Undefined);
  EXPECT_THROW(complexity(SampleEntropy{}, test::ramp(3)), InputTooShort);
  EXPECT_THROW(complexity(SampleEntropy{0, 0.2, 1}, test::ramp(30)), InvalidParameter);
  EXPECT_THROW(complexity(SampleEntropy{2, -0.1, 1}, test::ramp(30)), InvalidParameter);
}

TEST(SampleEntropy, NoiseAboveSine) {
  int wins = 0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    const auto noise = test::normal_series(2000, 300 + t);
    const auto wave = test::sine(2000, 20.0 + static_cast<double>(t));
    wins += complexity(SampleEntropy{}, noise).value > complexity(SampleEntropy{}, wave).value;
  }
  EXPECT_GE(wins, 19);
}

TEST(SampleEntropy, DefaultToleranceIsRecorded) {
  const auto x = test::normal_series(300, 2);
  const auto r = complexity(SampleEntropy{}, x);
  EXPECT_EQ(r.value, complexity(SampleEntropy{2, 0.2 * sample_std(x), 1}, x).value);
  EXPECT_EQ(r.recipe.find("auto"), std::string::npos);
}

TEST(ApproximateEntropy, MatchesBruteForcePhi) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 30 + rng() % 300;
    const std::size_t m = 1 + rng() % 3;
    const auto x = test::normal_series(n, rng());
    const double r = 0.25 * sample_std(x);
    const double expected = test::brute_phi(x, m, r, 1) - test::brute_phi(x, m + 1, r, 1);
    EXPECT_NEAR(complexity(ApproximateEntropy{m, r, 1}, x).value, expected, 1e-12);
  }
}

TEST(ApproximateEntropy, ConstantSeriesIsZero) {
  EXPECT_NEAR(complexity(ApproximateEntropy{}, constant(80)).value, 0.0, 1e-15);
}

TEST(LempelZiv76, HandParse) {
  EXPECT_EQ(complexity(LempelZiv76{}, as_doubles("0101010101")).value, 3.0);
  EXPECT_EQ(test::lz76_by_definition("0101010101"), 3u);
  EXPECT_EQ(complexity(LempelZiv76{}, as_doubles("0001101001000101")).value, 6.0);
  EXPECT_EQ(complexity(LempelZiv76{}, as_doubles("0")).value, 1.0);
  EXPECT_EQ(complexity(LempelZiv76{}, as_doubles("0000000")).value, 2.0);
}

TEST(LempelZiv76, MatchesDefinitionOnRandomStrings) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + rng() % 60;
    const int alphabet = 2 + static_cast<int>(rng() % 3);
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += static_cast<char>('0' + rng() % alphabet);
    EXPECT_EQ(complexity(LempelZiv76{}, as_doubles(s)).value, static_cast<double>(test::lz76_by_definition(s))) << s;
  }
}

TEST(LempelZiv76, NeedsSymbolsOrEncoder) {
  const auto x = test::normal_series(100, 3);
  EXPECT_THROW(complexity(LempelZiv76{}, x), InvalidParameter);
  const auto v = complexity(LempelZiv76{OrdinalPatterns{3, 1}}, x).value;
  EXPECT_GT(v, 1.0);
  EXPECT_EQ(complexity(LempelZiv76{OrdinalPatterns{3, 1}}, test::ramp(50)).value, 2.0);
}

TEST(MissingOutcomes, LogisticOrbit) {
  const auto x = test::logistic_orbit(10000, 0.123);
  EXPECT_DOUBLE_EQ(complexity(MissingOutcomes{OrdinalPatterns{3, 1}}, x).value, 1.0 / 6.0);
}

TEST(MissingOutcomes, BoundedAndNonIncreasingOverPrefixes) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto x = test::normal_series(2000, seed);
    for (const auto& o : {OutcomeSpace(OrdinalPatterns{4, 1}), OutcomeSpace(Dispersion{3, 1, 4}),
                          OutcomeSpace(BubbleSortSwaps{4, 1})}) {
      double prev = 1.0;
      for (std::size_t n : {20u, 50u, 100u, 400u, 2000u}) {
        const std::vector<double> prefix(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
        const double v = complexity(MissingOutcomes{o}, prefix).value;
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, prev);
        prev = v;
      }
    }
  }
}

TEST(ReverseDispersion, Bounds) {
  const auto x = test::normal_series(5000, 9);
  const double noise = complexity(ReverseDispersion{}, x).value;
  const double flat = complexity(ReverseDispersion{}, constant(100)).value;
  EXPECT_GE(noise, 0.0);
  EXPECT_LT(noise, flat);
  EXPECT_NEAR(flat, 1.0 - 1.0 / 9.0, 1e-12);  // delta PMF over 9 patterns
}

TEST(StatisticalComplexity, Endpoints) {
  // m=2 ordinal patterns on an alternating series are uniform; on a ramp, single.
  const std::vector<double> alt{1, 2, 1, 2, 1, 2, 1, 2, 1};
  for (auto d : {Distance::JensenShannon, Distance::Euclidean}) {
    StatisticalComplexity sc{OrdinalPatterns{2, 1}, RelativeAmount{}, {PlugIn{}, Shannon{}}, d};
    EXPECT_NEAR(complexity(sc, alt).value, 0.0, 1e-12);
    EXPECT_NEAR(complexity(sc, test::ramp(40)).value, 0.0, 1e-12);
  }
}

TEST(StatisticalComplexity, UnitIntervalAndNonTrivial) {
  double largest = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto x = seed % 2 ? test::normal_series(300, seed) : test::logistic_orbit(300, 0.1 + 0.02 * seed);
    for (auto d : {Distance::JensenShannon, Distance::Euclidean})
      for (const auto& e : {InfoEstimator{PlugIn{}, Shannon{}}, InfoEstimator{PlugIn{}, Renyi{}},
                            InfoEstimator{Jackknife{}, Tsallis{}}}) {
        const double v = complexity(StatisticalComplexity{OrdinalPatterns{4, 1}, RelativeAmount{}, e, d}, x).value;
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
        largest = std::max(largest, v);
      }
  }
  EXPECT_GT(largest, 0.05);
  EXPECT_THROW(complexity(StatisticalComplexity{OrdinalPatterns{3, 1}, RelativeAmount{},
                                                {PlugIn{}, FluctuationComplexity{}}, Distance::JensenShannon},
                          test::ramp(20)),
               Incompatible);
}

TEST(BubbleEntropy, FiniteAndDeterministic) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x = test::normal_series(50 + 30 * seed, seed);
    const double a = complexity(BubbleEntropy{}, x).value;
    EXPECT_TRUE(std::isfinite(a));
    EXPECT_EQ(a, complexity(BubbleEntropy{}, x).value);
  }
  EXPECT_TRUE(std::isfinite(complexity(BubbleEntropy{3, 1}, std::vector<double>{1, 3, 2, 5, 4}).value));
  EXPECT_THROW(complexity(BubbleEntropy{1, 1}, test::ramp(10)), InvalidParameter);
}

TEST(Complexity, DescribeRoundTripsDefaults) {
  EXPECT_EQ(describe(ComplexityEstimator(SampleEntropy{})).find("SampleEntropy"), 0u);
  const auto x = test::normal_series(100, 1);
  const auto resolved = resolve_defaults(ApproximateEntropy{}, x);
  EXPECT_DOUBLE_EQ(*std::get<ApproximateEntropy>(resolved).r, 0.2 * sample_std(x));
}
