#include <gtest/gtest.h>

#include <random>

#include "cmx/embedding.hpp"
#include "support.hpp"

using namespace cmx;

TEST(DelayEmbed, Examples) {
  const std::vector<double> x{1, 2, 3, 4};
  const auto e = delay_embed(x, {2, 1});
  ASSERT_EQ(e.size(), 3u);
  EXPECT_EQ(e.raw(), (std::vector<double>{1, 2, 2, 3, 3, 4}));

  const std::vector<double> y{1, 2, 3, 4, 5};
  const auto f = delay_embed(y, {3, 2});
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f.raw(), (std::vector<double>{1, 3, 5}));

  EXPECT_THROW(delay_embed(std::vector<double>{1, 2}, {3, 1}), InputTooShort);
}

TEST(DelayEmbed, TooShortReportsRequiredLength) {
  try {
    delay_embed(std::vector<double>{1, 2}, {3, 2});
    FAIL();
  } catch (const InputTooShort& e) {
    EXPECT_EQ(e.required(), 5u);
  }
}

TEST(DelayEmbed, InvalidSpec) {
  EXPECT_THROW(delay_embed(std::vector<double>{1, 2}, {0, 1}), InvalidParameter);
  EXPECT_THROW(delay_embed(std::vector<double>{1, 2}, {1, 0}), InvalidParameter);
}

TEST(DelayEmbed, DimensionOneIsIdentity) {
  const auto x = test::normal_series(50, 3);
  for (std::size_t tau : {1u, 4u, 100u}) {
    const auto e = delay_embed(x, {1, tau});
    EXPECT_EQ(e.dimension(), 1u);
    EXPECT_EQ(e.raw(), x);
  }
}

TEST(DelayEmbed, LengthFormulaProperty) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 1 + rng() % 8, tau = 1 + rng() % 6, n = 1 + rng() % 80;
    const auto x = test::uniform_series(n, trial);
    const std::size_t need = (m - 1) * tau + 1;
    if (n < need) {
      EXPECT_THROW(delay_embed(x, {m, tau}), InputTooShort);
      continue;
    }
    const auto e = delay_embed(x, {m, tau});
    ASSERT_EQ(e.size(), n - (m - 1) * tau);
    for (std::size_t i = 0; i < e.size(); ++i)
      for (std::size_t k = 0; k < m; ++k) ASSERT_EQ(e[i][k], x[i + k * tau]);
  }
}

TEST(DelayEmbed, FixedDimensionMatchesRuntime) {
  const auto x = test::normal_series(40, 5);
  const auto a = delay_embed<4>(x, 3);
  const auto b = delay_embed(x, {4, 3});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(a[i][k], b[i][k]);
}

TEST(DelayEmbed, ForEachWindowVisitsEveryWindowInOrder) {
  const auto x = test::normal_series(30, 9);
  std::vector<double> buf;
  std::vector<double> seen;
  for_each_window(x, {3, 2}, buf, [&](std::size_t i, std::span<const double> w) {
    EXPECT_EQ(i * 3, seen.size());
    seen.insert(seen.end(), w.begin(), w.end());
  });
  EXPECT_EQ(seen, delay_embed(x, {3, 2}).raw());
}
