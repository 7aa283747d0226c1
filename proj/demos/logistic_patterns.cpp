// Ordinal patterns of the fully chaotic logistic map: one of the six order-3
// patterns never occurs, and the entropy estimates reflect the gap.

#include <cstdio>

#include "cmx/cmx.hpp"

int main() {
  using namespace cmx;
  TimeSeries x(10000);
  double v = 0.4;
  for (int i = 0; i < 1000; ++i) v = 4.0 * v * (1.0 - v);
  for (auto& xi : x) xi = v = 4.0 * v * (1.0 - v);

  const OrdinalPatterns space{3, 1};
  const auto p = allprobabilities(RelativeAmount{}, space, x);
  std::printf("pattern  probability\n");
  for (std::size_t i = 0; i < p.size(); ++i)
    std::printf("%-8s %.4f\n", decode_outcome(space, static_cast<OutcomeId>(i), x).label.c_str(), p.values[i]);

  std::printf("\nmissing patterns: %llu of %llu\n", static_cast<unsigned long long>(missing_outcomes(space, x)),
              static_cast<unsigned long long>(*total_outcomes(space, x)));

  for (const InfoEstimator& e : {InfoEstimator{PlugIn{}, Shannon{}}, InfoEstimator{MillerMadow{}, Shannon{}},
                                 InfoEstimator{PlugIn{}, Renyi{2.0, 2.0}}, InfoEstimator{Jackknife{}, Tsallis{}}}) {
    const auto r = information_normalized(e, RelativeAmount{}, space, x);
    std::printf("%-70s %.4f\n", r.recipe.c_str(), r.value);
  }
  const auto c = complexity(StatisticalComplexity{space, RelativeAmount{}, {}, Distance::JensenShannon}, x);
  std::printf("%-70s %.4f\n", c.recipe.c_str(), c.value);
}
