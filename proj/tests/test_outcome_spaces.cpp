#include <gtest/gtest.h>

#include <complex>
#include <numeric>
#include <random>
#include <set>

#include "cmx/outcome_spaces.hpp"
#include "support.hpp"

using namespace cmx;

namespace {

std::vector<OutcomeSpace> counting_series_spaces() {
  return {UniqueElements{},
          ValueBinning{0.3, std::nullopt},
          ValueBinning{std::nullopt, 7},
          OrdinalPatterns{3, 1},
          OrdinalPatterns{5, 2},
          Dispersion{2, 1, 3},
          Dispersion{3, 2, 4},
          CosineSimilarityBinning{3, 1, 6},
          BubbleSortSwaps{4, 1}};
}

std::uint64_t distinct(const std::vector<OutcomeId>& ids) { return std::set<OutcomeId>(ids.begin(), ids.end()).size(); }

}  // namespace

TEST(TotalOutcomes, Examples) {
  EXPECT_EQ(total_outcomes(OrdinalPatterns{3, 1}), 6u);
  EXPECT_EQ(total_outcomes(Dispersion{2, 1, 3}), 9u);
  EXPECT_EQ(total_outcomes(BubbleSortSwaps{3, 1}), 4u);
  EXPECT_EQ(total_outcomes(CosineSimilarityBinning{2, 1, 5}), 5u);
  EXPECT_EQ(total_outcomes(SpatialOrdinalPatterns{square_stencil(2)}), 24u);
  EXPECT_EQ(total_outcomes(SpatialDispersion{square_stencil(2), 3}), 81u);
  EXPECT_FALSE(total_outcomes(UniqueElements{}).has_value());
  EXPECT_FALSE(total_outcomes(ValueBinning{0.1, std::nullopt}).has_value());
  EXPECT_FALSE(total_outcomes(PowerSpectrum{}).has_value());
}

TEST(TotalOutcomes, OverflowAndBounds) {
  EXPECT_THROW(total_outcomes(Dispersion{3, 1, std::size_t{1} << 22}), CardinalityOverflow);
  EXPECT_EQ(*total_outcomes(OrdinalPatterns{12, 1}), 479001600u);
  EXPECT_THROW(total_outcomes(OrdinalPatterns{13, 1}), InvalidParameter);
  EXPECT_THROW(total_outcomes(OrdinalPatterns{1, 1}), InvalidParameter);
  EXPECT_THROW(validate(ValueBinning{}), InvalidParameter);
  EXPECT_THROW(validate(ValueBinning{0.1, 3}), InvalidParameter);
  EXPECT_THROW(validate(SpatialOrdinalPatterns{{{0, 0}}}), InvalidParameter);
  EXPECT_THROW(validate(SpatialOrdinalPatterns{{{0, 0}, {0, 0}}}), InvalidParameter);
}

TEST(TotalOutcomes, DataResolved) {
  const std::vector<double> x{5, 5, 7, 1};
  EXPECT_EQ(total_outcomes(UniqueElements{}, x), 3u);
  EXPECT_EQ(total_outcomes(PowerSpectrum{}, x), 3u);
  EXPECT_EQ(total_outcomes(ValueBinning{std::nullopt, 4}, x), 4u);
  EXPECT_EQ(total_outcomes(ValueBinning{2.0, std::nullopt}, x), 3u);  // range 6, width 2
}

TEST(Encode, OrdinalIncreasingIsSinglePattern) {
  const auto e = encode(OrdinalPatterns{3, 1}, test::ramp(20));
  ASSERT_EQ(e.ids.size(), 18u);
  for (auto id : e.ids) EXPECT_EQ(id, 0u);
}

TEST(Encode, OrdinalAlternating) {
  const auto e = encode(OrdinalPatterns{2, 1}, std::vector<double>{1, 2, 1, 2});
  ASSERT_EQ(e.ids.size(), 3u);
  EXPECT_NE(e.ids[0], e.ids[1]);
  EXPECT_EQ(e.ids[0], e.ids[2]);
}

TEST(Encode, OrdinalMatchesEnumerationOracle) {
  for (std::size_t m = 2; m <= 6; ++m) {
    auto x = test::normal_series(150, m);
    for (auto& v : x) v = std::round(v * 2.0);  // ties
    for (std::size_t tau : {1u, 3u}) {
      const auto e = encode(OrdinalPatterns{m, tau}, x);
      ASSERT_EQ(e.ids.size(), x.size() - (m - 1) * tau);
      for (std::size_t i = 0; i < e.ids.size(); ++i) {
        std::vector<double> w(m);
        for (std::size_t k = 0; k < m; ++k) w[k] = x[i + k * tau];
        ASSERT_EQ(e.ids[i], test::enumerated_rank(test::stable_order(w))) << "m=" << m << " i=" << i;
      }
    }
  }
}

TEST(Encode, OrdinalLongWindowsMatchLehmerOfStableOrder) {
  for (std::size_t m = 7; m <= 12; ++m) {
    const auto x = test::normal_series(200, 100 + m);
    const auto e = encode(OrdinalPatterns{m, 1}, x);
    for (std::size_t i = 0; i < e.ids.size(); ++i) {
      const std::vector<double> w(x.begin() + static_cast<std::ptrdiff_t>(i),
                                  x.begin() + static_cast<std::ptrdiff_t>(i + m));
      ASSERT_EQ(e.ids[i], lehmer_encode(test::stable_order(w)));
      ASSERT_LT(e.ids[i], factorial(m));
    }
  }
}

TEST(Encode, OrdinalTiesRankEarlierIndexLower) {
  // Constant window: stable order is the identity permutation.
  const auto e = encode(OrdinalPatterns{4, 1}, std::vector<double>(6, 3.0));
  for (auto id : e.ids) EXPECT_EQ(id, 0u);
}

TEST(Encode, DispersionMatchesHandComputation) {
  auto x = test::normal_series(200, 17);
  const auto e = encode(Dispersion{2, 1, 2}, x);
  const double mu = std::accumulate(x.begin(), x.end(), 0.0) / 200.0;
  double ss = 0.0;
  for (double v : x) ss += (v - mu) * (v - mu);
  const double sd = std::sqrt(ss / 199.0);
  ASSERT_EQ(e.ids.size(), 199u);
  for (std::size_t i = 0; i < e.ids.size(); ++i) {
    auto sym = [&](double v) {
      const double y = 0.5 * (1.0 + std::erf((v - mu) / (sd * std::sqrt(2.0))));
      return std::min<std::uint64_t>(static_cast<std::uint64_t>(y * 2.0), 1);
    };
    EXPECT_EQ(e.ids[i], sym(x[i]) * 2 + sym(x[i + 1]));
    EXPECT_LT(e.ids[i], 4u);
  }
}

TEST(Encode, DispersionConstantSeriesUsesMiddleCategory) {
  const auto e = encode(Dispersion{2, 1, 3}, std::vector<double>(5, 1.0));
  for (auto id : e.ids) EXPECT_EQ(id, 1u * 3 + 1u);
}

TEST(Encode, CosineSimilarityBins) {
  // Successive windows (1,2),(2,3),(3,-10): similarities ~0.992 and ~-0.57.
  const auto e = encode(CosineSimilarityBinning{2, 1, 4}, std::vector<double>{1, 2, 3, -10});
  ASSERT_EQ(e.ids.size(), 2u);
  auto bin = [](double a0, double a1, double b0, double b1) {
    const double cs = (a0 * b0 + a1 * b1) / std::sqrt((a0 * a0 + a1 * a1) * (b0 * b0 + b1 * b1));
    return std::min<std::uint64_t>(static_cast<std::uint64_t>((cs + 1.0) / 2.0 * 4.0), 3);
  };
  EXPECT_EQ(e.ids[0], bin(1, 2, 2, 3));
  EXPECT_EQ(e.ids[1], bin(2, 3, 3, -10));
  EXPECT_EQ(e.ids[0], 3u);
  EXPECT_EQ(e.ids[1], 0u);
}

TEST(Encode, BubbleSortSwapsCountsInversions) {
  const auto e = encode(BubbleSortSwaps{3, 1}, std::vector<double>{3, 2, 1, 2, 3});
  EXPECT_EQ(e.ids, (std::vector<OutcomeId>{3, 1, 0}));
}

TEST(Encode, RejectsNonFiniteWithIndex) {
  std::vector<double> x{1, 2, NAN, 4, 5};
  for (const auto& o : counting_series_spaces()) {
    try {
      encode(o, x);
      FAIL() << describe(o);
    } catch (const NonFiniteInput& e) {
      EXPECT_EQ(e.index(), 2u) << describe(o);
    }
  }
}

TEST(Encode, TooShortInput) {
  EXPECT_THROW(encode(OrdinalPatterns{3, 2}, std::vector<double>{1, 2, 3, 4}), InputTooShort);
  EXPECT_THROW(encode(CosineSimilarityBinning{2, 1, 3}, std::vector<double>{1, 2}), InputTooShort);
  EXPECT_THROW(encode(UniqueElements{}, std::vector<double>{}), InputTooShort);
}

TEST(Encode, PowerSpectrumIsNotCounting) {
  EXPECT_THROW(encode(PowerSpectrum{}, test::ramp(8)), NotCounting);
  EXPECT_THROW(counts(PowerSpectrum{}, test::ramp(8)), NotCounting);
}

TEST(Encode, DeterministicAndWindowLocal) {
  const auto x = test::normal_series(120, 5);
  for (const auto& o : {OutcomeSpace(OrdinalPatterns{4, 2}), OutcomeSpace(BubbleSortSwaps{3, 3}),
                        OutcomeSpace(CosineSimilarityBinning{2, 2, 5})}) {
    const auto a = encode(o, x);
    EXPECT_EQ(a.ids, encode(o, x).ids);
    // Each id depends only on its own window: encoding a shifted copy of the
    // series yields the shifted ids.
    const std::vector<double> tail(x.begin() + 10, x.end());
    const auto b = encode(o, tail);
    ASSERT_EQ(b.ids.size() + 10, a.ids.size());
    for (std::size_t i = 0; i < b.ids.size(); ++i) ASSERT_EQ(b.ids[i], a.ids[i + 10]);
  }
}

TEST(Encode, UniqueElementsPermutesWithInput) {
  const std::vector<double> x{3, 1, 2, 3, 1};
  const std::vector<double> y{1, 3, 3, 2, 1};  // x permuted by (1,0,3,2,4)
  const auto a = encode(UniqueElements{}, x), b = encode(UniqueElements{}, y);
  const std::vector<std::size_t> perm{1, 0, 3, 2, 4};
  for (std::size_t i = 0; i < perm.size(); ++i) EXPECT_EQ(b.ids[i], a.ids[perm[i]]);
}

TEST(Counts, UniqueElements) {
  const auto c = counts(UniqueElements{}, std::vector<double>{1.5, 2.5, 1.5, 3.5});
  EXPECT_EQ(c.values, (std::vector<std::uint64_t>{2, 1, 1}));
  EXPECT_EQ(c.sum(), 4u);
  EXPECT_EQ(c.total_outcomes, 3u);
}

TEST(Counts, ValueBinningWidthExample) {
  const auto c = counts(ValueBinning{0.5, std::nullopt}, std::vector<double>{0.1, 0.4, 0.9});
  EXPECT_EQ(c.values, (std::vector<std::uint64_t>{2, 1}));
}

TEST(Counts, ValueBinningRightEdgeClosed) {
  const auto c = counts(ValueBinning{std::nullopt, 2}, std::vector<double>{0.0, 0.5, 1.0});
  EXPECT_EQ(c.values, (std::vector<std::uint64_t>{1, 2}));
  EXPECT_EQ(c.total_outcomes, 2u);
}

TEST(Counts, ValueBinningDegenerateRangeIsOneBin) {
  const auto c = counts(ValueBinning{0.1, std::nullopt}, std::vector<double>(5, 2.0));
  EXPECT_EQ(c.values, (std::vector<std::uint64_t>{5}));
  EXPECT_EQ(c.total_outcomes, 1u);
}

TEST(Counts, ValueBinningMultivariateMatchesEncode) {
  StateSpaceSet pts(3, test::uniform_series(900, 4));
  const ValueBinning b{0.2, std::nullopt};
  const auto c = counts(b, pts);
  const auto e = encode(b, pts);
  const auto t = tally(e.ids, e.total_outcomes);
  EXPECT_EQ(c.values, t.values);
  EXPECT_EQ(*c.outcome_ids, *t.outcome_ids);
  EXPECT_EQ(c.total_outcomes, 125u);
}

TEST(Counts, LogisticMapHasFiveOfSixPatterns) {
  const auto c = counts(OrdinalPatterns{3, 1}, test::logistic_orbit(10000, 0.4));
  EXPECT_EQ(c.size(), 5u);
  EXPECT_EQ(c.total_outcomes, 6u);
}

TEST(Counts, SumEqualsWindowCountForEverySpace) {
  const auto x = test::normal_series(333, 21);
  for (const auto& o : counting_series_spaces()) {
    const auto c = counts(o, x);
    EXPECT_EQ(c.sum(), encode(o, x).ids.size()) << describe(o);
    ASSERT_TRUE(c.outcome_ids.has_value());
    EXPECT_TRUE(std::is_sorted(c.outcome_ids->begin(), c.outcome_ids->end()));
  }
  Matrix img(12, 9);
  const auto noise = test::uniform_series(108, 3);
  for (std::size_t i = 0; i < 108; ++i) img(i / 9, i % 9) = noise[i];
  for (const auto& o : {OutcomeSpace(SpatialOrdinalPatterns{square_stencil(2)}),
                        OutcomeSpace(SpatialDispersion{square_stencil(3), 2})}) {
    EXPECT_EQ(counts(o, img).sum(), encode(o, img).ids.size());
  }
}

TEST(Counts, SparseTallyPathMatchesDense) {
  const auto x = test::normal_series(500, 2);
  const auto e = encode(OrdinalPatterns{10, 1}, x);  // 10! outcomes: sort path
  std::map<OutcomeId, std::uint64_t> oracle;
  for (auto id : e.ids) ++oracle[id];
  const auto c = counts(OrdinalPatterns{10, 1}, x);
  ASSERT_EQ(c.size(), oracle.size());
  std::size_t i = 0;
  for (const auto& [id, n] : oracle) {
    EXPECT_EQ((*c.outcome_ids)[i], id);
    EXPECT_EQ(c.values[i], n);
    ++i;
  }
}

TEST(Outcomes, Examples) {
  const auto a = outcomes(OrdinalPatterns{2, 1}, std::vector<double>{1, 2, 3});
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].label, "(0, 1)");
  EXPECT_EQ(a[0].value, (std::vector<double>{0, 1}));

  const auto b = outcomes(UniqueElements{}, std::vector<double>{5, 5, 7});
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0].value[0], 5.0);
  EXPECT_EQ(b[1].value[0], 7.0);

  const auto c = outcomes(BubbleSortSwaps{3, 1}, test::ramp(10));
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].id, 0u);
  EXPECT_EQ(c[0].label, "0");
}

TEST(Outcomes, DecodeRoundTripsForOrdinalPatterns) {
  // The decoded permutation sorts the window it came from.
  const auto x = test::normal_series(100, 8);
  const OrdinalPatterns o{4, 1};
  const auto e = encode(o, x);
  for (std::size_t i = 0; i < e.ids.size(); ++i) {
    const auto out = decode_outcome(o, e.ids[i], x);
    for (std::size_t k = 1; k < 4; ++k)
      ASSERT_LE(x[i + static_cast<std::size_t>(out.value[k - 1])], x[i + static_cast<std::size_t>(out.value[k])]);
  }
}

TEST(Outcomes, DispersionLabelsAreOneBasedSymbols) {
  const auto o = outcomes(Dispersion{2, 1, 3}, std::vector<double>(4, 0.0));
  ASSERT_EQ(o.size(), 1u);
  EXPECT_EQ(o[0].label, "(2, 2)");
}

TEST(MissingOutcomes, Examples) {
  EXPECT_EQ(missing_outcomes(OrdinalPatterns{3, 1}, test::ramp(100)), 5u);
  EXPECT_EQ(missing_outcomes(OrdinalPatterns{3, 1}, test::logistic_orbit(10000, 0.123)), 1u);
}

TEST(MissingOutcomes, DispersionSeriesHittingAllPatterns) {
  // Brute-force search over 5-point series with values in {0,1,2}.
  bool found = false;
  for (int code = 0; code < 243 && !found; ++code) {
    std::vector<double> x(5);
    int c = code;
    for (auto& v : x) {
      v = c % 3;
      c /= 3;
    }
    const auto e = encode(Dispersion{2, 1, 2}, x);
    if (distinct(e.ids) == 4) {
      found = true;
      EXPECT_EQ(missing_outcomes(Dispersion{2, 1, 2}, x), 0u);
    }
  }
  EXPECT_TRUE(found);
}

TEST(MissingOutcomes, PlusDistinctEqualsTotal) {
  const auto x = test::normal_series(400, 31);
  for (const auto& o : counting_series_spaces()) {
    if (std::holds_alternative<UniqueElements>(o)) continue;
    const auto e = encode(o, x);
    EXPECT_EQ(missing_outcomes(o, x) + distinct(e.ids), *total_outcomes(o, x)) << describe(o);
  }
}

TEST(MissingOutcomes, UncountableSpacesRejected) {
  EXPECT_THROW(missing_outcomes(UniqueElements{}, test::ramp(5)), UncountableSpace);
  EXPECT_THROW(missing_outcomes(PowerSpectrum{}, test::ramp(5)), UncountableSpace);
}

TEST(Spatial, ConstantImageSinglePattern) {
  Matrix img(6, 7, 0.25);
  const auto e = spatial_encode(SpatialOrdinalPatterns{square_stencil(2)}, img);
  ASSERT_EQ(e.ids.size(), 5u * 6u);
  for (auto id : e.ids) EXPECT_EQ(id, e.ids[0]);
}

TEST(Spatial, TwoByTwoImageOnePlacement) {
  Matrix img(2, 2, std::vector<double>{1, 2, 3, 4});
  const auto e = spatial_encode(SpatialOrdinalPatterns{square_stencil(2)}, img);
  ASSERT_EQ(e.ids.size(), 1u);
  EXPECT_EQ(e.ids[0], 0u);  // gathered (1,2,3,4) is ascending
}

TEST(Spatial, GradientImageSinglePattern) {
  Matrix img(10, 10);
  for (std::size_t r = 0; r < 10; ++r)
    for (std::size_t c = 0; c < 10; ++c) img(r, c) = 3.0 * r + c;
  const auto cnt = counts(SpatialOrdinalPatterns{square_stencil(2)}, img);
  EXPECT_EQ(cnt.size(), 1u);
}

TEST(Spatial, ArbitraryStencilWithNegativeOffsets) {
  // Cross-shaped stencil centred on the anchor.
  const Stencil cross{{0, 0}, {-1, 0}, {1, 0}, {0, -1}, {0, 1}};
  Matrix img(5, 6);
  const auto noise = test::normal_series(30, 77);
  for (std::size_t i = 0; i < 30; ++i) img(i / 6, i % 6) = noise[i];
  const auto e = spatial_encode(SpatialOrdinalPatterns{cross}, img);
  ASSERT_EQ(e.ids.size(), 3u * 4u);
  std::size_t k = 0;
  for (std::size_t r = 1; r < 4; ++r)
    for (std::size_t c = 1; c < 5; ++c) {
      std::vector<double> w;
      for (const auto& [dr, dc] : cross) w.push_back(img(r + dr, c + dc));
      EXPECT_EQ(e.ids[k++], test::enumerated_rank(test::stable_order(w)));
    }
}

TEST(Spatial, StencilLargerThanImage) {
  Matrix img(2, 2, 0.0);
  EXPECT_THROW(spatial_encode(SpatialOrdinalPatterns{square_stencil(3)}, img), InputTooShort);
  EXPECT_THROW(spatial_encode(OrdinalPatterns{}, img), Incompatible);
  EXPECT_THROW(encode(SpatialDispersion{square_stencil(2), 3}, test::ramp(5)), Incompatible);
}

TEST(PowerSpectrum, MatchesNaiveDft) {
  const auto x = test::normal_series(37, 12);
  const auto p = spectral_probabilities(x);
  ASSERT_EQ(p.size(), 37u / 2 + 1);
  std::vector<double> power(p.size());
  double total = 0.0;
  for (std::size_t k = 0; k < power.size(); ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t)
      acc += x[t] * std::polar(1.0, -2.0 * M_PI * static_cast<double>(k * t) / 37.0);
    power[k] = std::norm(acc);
    total += power[k];
  }
  for (std::size_t k = 0; k < power.size(); ++k) EXPECT_NEAR(p.values[k], power[k] / total, 1e-12);
  EXPECT_TRUE(validate_pmf(p));
}

TEST(PowerSpectrum, PureToneConcentratesInOneBin) {
  const auto x = test::sine(64, 8.0);  // frequency bin 8
  const auto p = spectral_probabilities(x);
  EXPECT_NEAR(p.values[8], 1.0, 1e-12);
}

TEST(Describe, Strings) {
  EXPECT_EQ(describe(OrdinalPatterns{3, 1}), "OrdinalPatterns(m=3, tau=1)");
  EXPECT_EQ(describe(ValueBinning{0.5, std::nullopt}), "ValueBinning(width=0.5)");
  EXPECT_EQ(describe(SpatialOrdinalPatterns{square_stencil(2)}),
            "SpatialOrdinalPatterns(stencil=[(0, 0), (0, 1), (1, 0), (1, 1)])");
}
