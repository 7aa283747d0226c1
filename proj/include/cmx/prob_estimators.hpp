#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cmx/core.hpp"
#include "cmx/outcome_spaces.hpp"

namespace cmx {

struct RelativeAmount {};

struct AddConstant {
  double c = 1.0;
};

struct BayesianRegularization {
  double a = 1.0;
};

// James-Stein shrinkage towards the uniform distribution. With no lambda the
// intensity is estimated from the counts.
struct Shrinkage {
  std::optional<double> lambda;
};

using ProbEstimator = std::variant<RelativeAmount, AddConstant, BayesianRegularization, Shrinkage>;

// Largest outcome space a smoothing estimator will expand to full support.
inline constexpr std::uint64_t kMaxMaterializedOutcomes = std::uint64_t{1} << 27;

inline std::string describe(const ProbEstimator& e) {
  using detail::Overloaded;
  return std::visit(Overloaded{
                        [](const RelativeAmount&) { return std::string("RelativeAmount()"); },
                        [](const AddConstant& a) { return "AddConstant(c=" + detail::fmt_real(a.c) + ")"; },
                        [](const BayesianRegularization& b) {
                          return "BayesianRegularization(a=" + detail::fmt_real(b.a) + ")";
                        },
                        [](const Shrinkage& s) {
                          return s.lambda ? "Shrinkage(lambda=" + detail::fmt_real(*s.lambda) + ")"
                                          : std::string("Shrinkage()");
                        },
                    },
                    e);
}

inline void validate(const ProbEstimator& e) {
  using detail::Overloaded;
  std::visit(Overloaded{
                 [](const RelativeAmount&) {},
                 [](const AddConstant& a) {
                   if (!(a.c > 0.0)) throw InvalidParameter(Axis::Probabilities, "AddConstant c must be > 0");
                 },
                 [](const BayesianRegularization& b) {
                   if (!(b.a > 0.0)) throw InvalidParameter(Axis::Probabilities, "BayesianRegularization a must be > 0");
                 },
                 [](const Shrinkage& s) {
                   if (s.lambda && !(*s.lambda >= 0.0 && *s.lambda <= 1.0))
                     throw InvalidParameter(Axis::Probabilities, "Shrinkage lambda must be in [0, 1]");
                 },
             },
             e);
}

namespace detail {

// Counts expanded to all `total` outcomes in id order.
inline std::vector<std::uint64_t> dense_counts(const Counts& c, std::uint64_t total) {
  if (total > kMaxMaterializedOutcomes)
    throw CardinalityOverflow(Axis::Probabilities, "outcome space too large to expand to full support");
  std::vector<std::uint64_t> dense(total, 0);
  if (c.outcome_ids) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      const auto id = (*c.outcome_ids)[i];
      if (id >= total) throw InvalidParameter(Axis::Probabilities, "outcome id exceeds total_outcomes");
      dense[id] += c.values[i];
    }
  } else {
    if (c.size() != total)
      throw InvalidParameter(Axis::Probabilities, "counts without outcome ids must cover every outcome");
    std::copy(c.values.begin(), c.values.end(), dense.begin());
  }
  return dense;
}

inline std::vector<OutcomeId> iota_ids(std::uint64_t n) {
  std::vector<OutcomeId> ids(n);
  for (std::uint64_t i = 0; i < n; ++i) ids[i] = i;
  return ids;
}

// (n_i + k) / (N + k L), shared by AddConstant and BayesianRegularization.
inline Probabilities pseudocount(const std::vector<std::uint64_t>& dense, std::uint64_t n, double k) {
  Probabilities p;
  const double denom = static_cast<double>(n) + k * static_cast<double>(dense.size());
  p.values.resize(dense.size());
  for (std::size_t i = 0; i < dense.size(); ++i) p.values[i] = (static_cast<double>(dense[i]) + k) / denom;
  p.outcome_ids = iota_ids(dense.size());
  return p;
}

// Shrinkage intensity towards uniform, clamped to [0, 1]:
//   lambda = (1 - sum p_i^2) / ((N - 1) sum (1/L - p_i)^2)
inline double shrinkage_intensity(const std::vector<std::uint64_t>& dense, std::uint64_t n) {
  if (n <= 1) return 1.0;
  const double t = 1.0 / static_cast<double>(dense.size());
  double sq = 0.0, dev = 0.0;
  for (auto v : dense) {
    const double p = static_cast<double>(v) / static_cast<double>(n);
    sq += p * p;
    dev += (t - p) * (t - p);
  }
  if (dev <= 0.0) return 1.0;
  return std::clamp((1.0 - sq) / (static_cast<double>(n - 1) * dev), 0.0, 1.0);
}

}  // namespace detail

// Counts -> PMF. RelativeAmount keeps the observed support; the smoothing
// estimators return every outcome of the space in id order.
inline Probabilities estimate_probabilities(const ProbEstimator& est, const Counts& counts) {
  validate(est);
  const std::uint64_t n = counts.sum();
  if (n == 0) throw EmptyCounts(Axis::Probabilities, "cannot estimate probabilities from zero counts");
  if (std::holds_alternative<RelativeAmount>(est)) return to_probabilities(counts);

  if (!counts.total_outcomes)
    throw UncountableSpace(Axis::Probabilities, describe(est) + " needs a finite number of outcomes");
  const auto dense = detail::dense_counts(counts, *counts.total_outcomes);
  using detail::Overloaded;
  return std::visit(
      Overloaded{
          [&](const RelativeAmount&) { return to_probabilities(counts); },
          [&](const AddConstant& a) { return detail::pseudocount(dense, n, a.c); },
          [&](const BayesianRegularization& b) { return detail::pseudocount(dense, n, b.a); },
          [&](const Shrinkage& s) {
            const double lambda = s.lambda.value_or(detail::shrinkage_intensity(dense, n));
            const double t = 1.0 / static_cast<double>(dense.size());
            Probabilities p;
            p.values.resize(dense.size());
            for (std::size_t i = 0; i < dense.size(); ++i)
              p.values[i] = lambda * t + (1.0 - lambda) * (static_cast<double>(dense[i]) / static_cast<double>(n));
            p.outcome_ids = detail::iota_ids(dense.size());
            return p;
          },
      },
      est);
}

// PMF over all outcomes of the space (zero entries included), id-aligned.
inline Probabilities allprobabilities(const ProbEstimator& est, const OutcomeSpace& o, const DataView& data) {
  validate(est);
  if (!is_counting(o)) {
    if (!std::holds_alternative<RelativeAmount>(est))
      throw NotCounting(Axis::Probabilities, describe(est) + " requires a counting-based outcome space");
    return spectral_probabilities(data.series());
  }
  const auto c = counts(o, data);
  if (!std::holds_alternative<RelativeAmount>(est)) return estimate_probabilities(est, c);
  if (!c.total_outcomes) throw UncountableSpace(Axis::Probabilities, "outcome space too large for allprobabilities");
  const auto dense = detail::dense_counts(c, *c.total_outcomes);
  Probabilities p;
  const double n = static_cast<double>(c.sum());
  p.values.resize(dense.size());
  for (std::size_t i = 0; i < dense.size(); ++i) p.values[i] = static_cast<double>(dense[i]) / n;
  p.outcome_ids = detail::iota_ids(dense.size());
  return p;
}

// PMF restricted to outcomes with non-zero probability, id-aligned.
inline Probabilities probabilities(const ProbEstimator& est, const OutcomeSpace& o, const DataView& data) {
  validate(est);
  if (!is_counting(o)) {
    auto all = allprobabilities(est, o, data);
    Probabilities p;
    p.outcome_ids.emplace();
    for (std::size_t i = 0; i < all.size(); ++i)
      if (all.values[i] > 0.0) {
        p.values.push_back(all.values[i]);
        p.outcome_ids->push_back((*all.outcome_ids)[i]);
      }
    return p;
  }
  auto p = estimate_probabilities(est, counts(o, data));
  if (std::none_of(p.values.begin(), p.values.end(), [](double v) { return v == 0.0; })) return p;
  Probabilities nz;
  nz.outcome_ids.emplace();
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p.values[i] > 0.0) {
      nz.values.push_back(p.values[i]);
      nz.outcome_ids->push_back((*p.outcome_ids)[i]);
    }
  return nz;
}

}  // namespace cmx
