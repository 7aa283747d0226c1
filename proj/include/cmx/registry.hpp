#pragma once

#include <cstdint>
#include <ostream>
#include <variant>

#include "cmx/complexity.hpp"
#include "cmx/differential.hpp"
#include "cmx/discrete_estimators.hpp"
#include "cmx/info_measures.hpp"
#include "cmx/outcome_spaces.hpp"
#include "cmx/prob_estimators.hpp"

namespace cmx {

// Sizes of each axis of the catalog. Built from the variant alternatives by
// `implemented_catalog`, or by hand in tests.
struct Catalog {
  std::uint64_t counting_spaces = 0;
  std::uint64_t noncounting_spaces = 0;  // PMF only through RelativeAmount
  std::uint64_t prob_estimators = 0;
  std::uint64_t definitions = 0;
  std::uint64_t generic_estimators = 0;        // apply to every definition
  std::uint64_t shannon_only_estimators = 0;   // extra estimators for Shannon
  std::uint64_t differential_estimators = 0;
  std::uint64_t complexity_estimators = 0;     // excluding StatisticalComplexity
  std::uint64_t normalizable_definitions = 0;  // usable inside StatisticalComplexity
  std::uint64_t probability_functions = 2;     // probabilities, allprobabilities
};

struct RegistryCount {
  std::uint64_t pmf_ways = 0;           // counting * N_P + noncounting
  std::uint64_t estimator_sum = 0;      // sum over definitions of their estimator counts
  std::uint64_t discrete = 0;           // pmf_ways * estimator_sum
  std::uint64_t differential = 0;
  std::uint64_t statistical_complexity = 0;
  std::uint64_t complexity = 0;         // statistical_complexity + the others
  std::uint64_t probabilities = 0;
  std::uint64_t total = 0;
};

inline RegistryCount registry_count(const Catalog& c) {
  RegistryCount r;
  r.pmf_ways = c.counting_spaces * c.prob_estimators + c.noncounting_spaces;
  r.estimator_sum = c.definitions * c.generic_estimators + c.shannon_only_estimators;
  r.discrete = r.pmf_ways * r.estimator_sum;
  r.differential = c.differential_estimators;
  r.statistical_complexity = (c.counting_spaces + c.noncounting_spaces) * c.normalizable_definitions;
  r.complexity = r.statistical_complexity + c.complexity_estimators;
  r.probabilities = c.probability_functions * r.pmf_ways;
  r.total = r.discrete + r.differential + r.complexity + r.probabilities;
  return r;
}

namespace detail {

template <class V, class F>
std::uint64_t count_alternatives(F&& pred) {
  std::uint64_t n = 0;
  [&]<std::size_t... I>(std::index_sequence<I...>) {
    ((n += pred(V(std::in_place_index<I>)) ? 1 : 0), ...);
  }(std::make_index_sequence<std::variant_size_v<V>>{});
  return n;
}

}  // namespace detail

inline Catalog implemented_catalog() {
  Catalog c;
  c.counting_spaces = detail::count_alternatives<OutcomeSpace>([](const OutcomeSpace& o) { return is_counting(o); });
  c.noncounting_spaces = detail::count_alternatives<OutcomeSpace>([](const OutcomeSpace& o) { return !is_counting(o); });
  c.prob_estimators = std::variant_size_v<ProbEstimator>;
  c.definitions = std::variant_size_v<InfoMeasure>;
  c.generic_estimators =
      detail::count_alternatives<DiscreteEstimator>([](const DiscreteEstimator& e) { return !is_shannon_only(e); });
  c.shannon_only_estimators =
      detail::count_alternatives<DiscreteEstimator>([](const DiscreteEstimator& e) { return is_shannon_only(e); });
  c.differential_estimators = std::variant_size_v<DifferentialEstimator>;
  c.complexity_estimators = detail::count_alternatives<ComplexityEstimator>(
      [](const ComplexityEstimator& e) { return !std::holds_alternative<StatisticalComplexity>(e); });
  c.normalizable_definitions =
      detail::count_alternatives<InfoMeasure>([](const InfoMeasure& m) { return is_normalizable(m); });
  return c;
}

inline void print_registry(std::ostream& os, const Catalog& c, const RegistryCount& r) {
  os << "outcome_spaces.counting " << c.counting_spaces << '\n'
     << "outcome_spaces.noncounting " << c.noncounting_spaces << '\n'
     << "probabilities_estimators " << c.prob_estimators << '\n'
     << "definitions " << c.definitions << '\n'
     << "discrete_estimators.generic " << c.generic_estimators << '\n'
     << "discrete_estimators.shannon_only " << c.shannon_only_estimators << '\n'
     << "differential_estimators " << c.differential_estimators << '\n'
     << "complexity_estimators " << c.complexity_estimators + 1 << '\n'
     << "pmf_ways " << r.pmf_ways << '\n'
     << "estimator_sum " << r.estimator_sum << '\n'
     << "discrete_total " << r.discrete << '\n'
     << "differential_total " << r.differential << '\n'
     << "statistical_complexity_variants " << r.statistical_complexity << '\n'
     << "complexity_total " << r.complexity << '\n'
     << "probabilities_total " << r.probabilities << '\n'
     << "total " << r.total << '\n';
}

}  // namespace cmx
