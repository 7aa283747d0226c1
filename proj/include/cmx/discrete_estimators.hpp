#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <variant>

#include "cmx/core.hpp"
#include "cmx/info_measures.hpp"
#include "cmx/outcome_spaces.hpp"
#include "cmx/prob_estimators.hpp"

namespace cmx {

struct PlugIn {};
// Leave-one-window-out resampling of the counts.
struct Jackknife {};
// Shannon only.
struct MillerMadow {};
struct ChaoShen {};
struct HorvitzThompson {};

using DiscreteEstimator = std::variant<PlugIn, Jackknife, MillerMadow, ChaoShen, HorvitzThompson>;

// An estimator bound to the measure definition it estimates.
struct InfoEstimator {
  DiscreteEstimator estimator = PlugIn{};
  InfoMeasure definition = Shannon{};
};

inline bool is_shannon_only(const DiscreteEstimator& e) {
  return !std::holds_alternative<PlugIn>(e) && !std::holds_alternative<Jackknife>(e);
}

inline std::string estimator_name(const DiscreteEstimator& e) {
  using detail::Overloaded;
  return std::visit(Overloaded{
                        [](const PlugIn&) { return "PlugIn"; },
                        [](const Jackknife&) { return "Jackknife"; },
                        [](const MillerMadow&) { return "MillerMadow"; },
                        [](const ChaoShen&) { return "ChaoShen"; },
                        [](const HorvitzThompson&) { return "HorvitzThompson"; },
                    },
                    e);
}

inline std::string describe(const InfoEstimator& e) {
  return estimator_name(e.estimator) + "(" + describe(e.definition) + ")";
}

inline void validate(const InfoEstimator& e) {
  validate(e.definition);
  if (is_shannon_only(e.estimator) && !std::holds_alternative<Shannon>(e.definition))
    throw Incompatible(Axis::Estimator, estimator_name(e.estimator) + " estimates Shannon entropy only, not " +
                                            describe(e.definition));
}

namespace detail {

inline std::uint64_t resolved_total(const Counts& c) { return c.total_outcomes.value_or(c.size()); }

inline double plugin(const InfoMeasure& def, const ProbEstimator& pest, const Counts& c) {
  return measure_value(def, estimate_probabilities(pest, c), resolved_total(c));
}

// -sum w(p) p ln p / (1 - (1 - p)^N) in nats; w scales p by the sample coverage.
inline double coverage_adjusted(const Probabilities& p, std::uint64_t n, double coverage) {
  double h = 0.0;
  const double dn = static_cast<double>(n);
  for (double v : p.values) {
    if (v <= 0.0) continue;
    const double pa = coverage * v;
    const double inclusion = 1.0 - std::pow(1.0 - pa, dn);
    h -= pa * std::log(pa) / inclusion;
  }
  return h;
}

}  // namespace detail

// Estimate of `def` from counts, using `pest` to turn counts into a PMF.
inline double estimate_discrete(const InfoEstimator& e, const Counts& counts,
                                const ProbEstimator& pest = RelativeAmount{}) {
  validate(e);
  const std::uint64_t n = counts.sum();
  if (n == 0) throw EmptyCounts(Axis::Estimator, "cannot estimate from zero counts");
  using detail::Overloaded;
  return std::visit(
      Overloaded{
          [&](const PlugIn&) { return detail::plugin(e.definition, pest, counts); },
          [&](const Jackknife&) {
            // N theta - (N-1)/N sum_j theta_{-j}; windows of one outcome give equal theta_{-j}.
            const double theta = detail::plugin(e.definition, pest, counts);
            if (n == 1) return theta;
            double loo = 0.0;
            Counts reduced = counts;
            for (std::size_t i = 0; i < counts.size(); ++i) {
              if (counts.values[i] == 0) continue;
              --reduced.values[i];
              loo += static_cast<double>(counts.values[i]) * detail::plugin(e.definition, pest, reduced);
              ++reduced.values[i];
            }
            const double dn = static_cast<double>(n);
            return dn * theta - (dn - 1.0) / dn * loo;
          },
          [&](const MillerMadow&) {
            const double base = std::get<Shannon>(e.definition).base;
            std::size_t observed = 0;
            for (auto v : counts.values) observed += v > 0;
            const double correction =
                (static_cast<double>(observed) - 1.0) / (2.0 * static_cast<double>(n) * std::log(base));
            return detail::plugin(e.definition, pest, counts) + correction;
          },
          [&](const ChaoShen&) {
            std::uint64_t singletons = 0;
            for (auto v : counts.values) singletons += v == 1;
            if (singletons == n) singletons = n - 1;
            const double coverage = 1.0 - static_cast<double>(singletons) / static_cast<double>(n);
            const double base = std::get<Shannon>(e.definition).base;
            return detail::coverage_adjusted(estimate_probabilities(pest, counts), n, coverage) / std::log(base);
          },
          [&](const HorvitzThompson&) {
            const double base = std::get<Shannon>(e.definition).base;
            return detail::coverage_adjusted(estimate_probabilities(pest, counts), n, 1.0) / std::log(base);
          },
      },
      e.estimator);
}

inline std::string describe_information(const InfoEstimator& e, const ProbEstimator& pest, const OutcomeSpace& o,
                                        bool normalized) {
  return std::string(normalized ? "information_normalized(" : "information(") + describe(e) + ", " + describe(pest) +
         ", " + describe(o) + ")";
}

// encode -> counts -> PMF -> functional.
inline MeasureResult information(const InfoEstimator& e, const ProbEstimator& pest, const OutcomeSpace& o,
                                 const DataView& data) {
  validate(e);
  validate(pest);
  validate(o);
  MeasureResult r;
  r.recipe = describe_information(e, pest, o, false);
  r.n_samples = data.length();
  if (!is_counting(o)) {
    if (!std::holds_alternative<PlugIn>(e.estimator))
      throw Incompatible(Axis::Estimator, estimator_name(e.estimator) + " needs a counting-based outcome space");
    const auto p = allprobabilities(pest, o, data);
    r.value = measure_value(e.definition, p, p.size());
    return r;
  }
  r.value = estimate_discrete(e, counts(o, data), pest);
  return r;
}

// information / measure_maximum(def, L) with L the (data-resolved) size of the
// outcome space. Bias-corrected estimates can leave [0, 1]; they are clamped
// and flagged in `clamped`.
inline MeasureResult information_normalized(const InfoEstimator& e, const ProbEstimator& pest, const OutcomeSpace& o,
                                            const DataView& data) {
  validate(e);
  if (!is_normalizable(e.definition))
    throw Incompatible(Axis::Measure, describe(e.definition) + " cannot be normalized");
  MeasureResult r = information(e, pest, o, data);
  const auto total = total_outcomes(o, data);
  if (!total) throw UncountableSpace(Axis::OutcomeSpace, "normalization needs a finite outcome space");
  const double max = measure_maximum(e.definition, *total);
  if (!(max > 0.0)) throw DegenerateSpace(Axis::Measure, "maximum is zero for a single-outcome space");
  const double v = r.value / max;
  r.value = std::clamp(v, 0.0, 1.0);
  r.clamped = v != r.value;
  r.normalized = true;
  r.recipe = describe_information(e, pest, o, true);
  return r;
}

}  // namespace cmx
