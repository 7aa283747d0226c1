#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cmx/core.hpp"
#include "cmx/discrete_estimators.hpp"
#include "cmx/embedding.hpp"
#include "cmx/info_measures.hpp"
#include "cmx/kd_tree.hpp"
#include "cmx/outcome_spaces.hpp"
#include "cmx/prob_estimators.hpp"

namespace cmx {

// Tolerance r is absolute; when unset it resolves to 0.2 * sample std of the
// input the estimator is first applied to.
struct ApproximateEntropy {
  std::size_t m = 2;
  std::optional<double> r;
  std::size_t tau = 1;
};

struct SampleEntropy {
  std::size_t m = 2;
  std::optional<double> r;
  std::size_t tau = 1;
};

// Phrase count of the LZ76 parsing of an integer symbol sequence. Real-valued
// input must be symbolized first, either by the caller or through `encoder`.
struct LempelZiv76 {
  std::optional<OutcomeSpace> encoder;
};

struct ReverseDispersion {
  std::size_t m = 2;
  std::size_t c = 3;
  std::size_t tau = 1;
};

// Fraction of the outcome space absent from the data.
struct MissingOutcomes {
  OutcomeSpace space = OrdinalPatterns{};
};

enum class Distance { JensenShannon, Euclidean };

// Normalized information times normalized disequilibrium (distance of the PMF
// to the uniform PMF over the whole outcome space).
struct StatisticalComplexity {
  OutcomeSpace space = OrdinalPatterns{};
  ProbEstimator probabilities = RelativeAmount{};
  InfoEstimator estimator = {};
  Distance distance = Distance::JensenShannon;
};

struct BubbleEntropy {
  std::size_t m = 3;
  std::size_t tau = 1;
};

using ComplexityEstimator = std::variant<ApproximateEntropy, SampleEntropy, LempelZiv76, ReverseDispersion,
                                         MissingOutcomes, StatisticalComplexity, BubbleEntropy>;

inline const char* to_string(Distance d) { return d == Distance::JensenShannon ? "JensenShannon" : "Euclidean"; }

inline std::string describe(const ComplexityEstimator& e) {
  using detail::fmt_real;
  using detail::Overloaded;
  auto tol = [](const std::optional<double>& r) { return r ? fmt_real(*r) : std::string("auto"); };
  return std::visit(
      Overloaded{
          [&](const ApproximateEntropy& s) {
            return "ApproximateEntropy(m=" + std::to_string(s.m) + ", r=" + tol(s.r) + ", tau=" + std::to_string(s.tau) +
                   ")";
          },
          [&](const SampleEntropy& s) {
            return "SampleEntropy(m=" + std::to_string(s.m) + ", r=" + tol(s.r) + ", tau=" + std::to_string(s.tau) + ")";
          },
          [](const LempelZiv76& s) {
            return s.encoder ? "LempelZiv76(encoder=" + describe(*s.encoder) + ")" : std::string("LempelZiv76()");
          },
          [](const ReverseDispersion& s) {
            return "ReverseDispersion(m=" + std::to_string(s.m) + ", c=" + std::to_string(s.c) +
                   ", tau=" + std::to_string(s.tau) + ")";
          },
          [](const MissingOutcomes& s) { return "MissingOutcomes(space=" + describe(s.space) + ")"; },
          [](const StatisticalComplexity& s) {
            return "StatisticalComplexity(space=" + describe(s.space) + ", probabilities=" + describe(s.probabilities) +
                   ", estimator=" + describe(s.estimator) + ", distance=" + to_string(s.distance) + ")";
          },
          [](const BubbleEntropy& s) {
            return "BubbleEntropy(m=" + std::to_string(s.m) + ", tau=" + std::to_string(s.tau) + ")";
          },
      },
      e);
}

// ---------------------------------------------------------------------------
// Template matching
// ---------------------------------------------------------------------------

struct TemplateMatches {
  std::uint64_t a = 0;  // (m+1)-template pairs within r
  std::uint64_t b = 0;  // m-template pairs within r
};

namespace detail {

inline void check_tolerance(double r) {
  // r = 0 is exact matching; the default 0.2 * std is 0 on constant data.
  if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidParameter(Axis::Complexity, "tolerance r must be >= 0");
}

inline double default_tolerance(std::span<const double> x) { return 0.2 * sample_std(x); }

}  // namespace detail

// Pairs i < j of delay templates whose max-norm distance is <= r, over the
// first N - m*tau templates so both lengths are counted on the same index set.
inline TemplateMatches sample_entropy_matches(std::span<const double> x, std::size_t m, double r, std::size_t tau) {
  if (m < 1 || tau < 1) throw InvalidParameter(Axis::Complexity, "m and tau must be >= 1");
  const std::size_t need = m * tau + 2;
  if (x.size() < need) throw InputTooShort(Axis::Complexity, need, x.size());
  const std::size_t n = x.size() - m * tau;
  std::vector<double> flat(n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < m; ++k) flat[i * m + k] = x[i + k * tau];
  const StateSpaceSet templates(m, std::move(flat));
  const KdTree<Chebyshev> tree(templates);

  TemplateMatches t;
  for (std::size_t i = 0; i < n; ++i) {
    const double next = x[i + m * tau];
    tree.for_each_within(templates[i], r, [&](std::size_t j) {
      if (j <= i) return;
      ++t.b;
      if (std::abs(next - x[j + m * tau]) <= r) ++t.a;
    });
  }
  return t;
}

namespace detail {

// Mean over templates of log(fraction of templates within r), self included.
inline double approximate_entropy_phi(std::span<const double> x, std::size_t m, double r, std::size_t tau) {
  const StateSpaceSet templates = delay_embed(x, EmbeddingSpec{m, tau});
  const KdTree<Chebyshev> tree(templates);
  const double n = static_cast<double>(templates.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < templates.size(); ++i)
    acc += std::log(static_cast<double>(tree.count_within(templates[i], r)) / n);
  return acc / n;
}

// Kaspar-Schuster parsing; the trailing incomplete phrase counts.
inline std::uint64_t lz76_phrases(std::span<const std::int64_t> s) {
  const std::size_t n = s.size();
  if (n == 0) throw InputTooShort(Axis::Complexity, 1, 0);
  if (n == 1) return 1;
  std::size_t i = 0, k = 1, l = 1, k_max = 1;
  std::uint64_t c = 1;
  while (true) {
    if (s[i + k - 1] == s[l + k - 1]) {
      ++k;
      if (l + k > n) {
        ++c;
        break;
      }
    } else {
      k_max = std::max(k, k_max);
      ++i;
      if (i == l) {
        ++c;
        l += k_max;
        if (l + 1 > n) break;
        i = 0;
        k = 1;
        k_max = 1;
      } else {
        k = 1;
      }
    }
  }
  return c;
}

inline std::vector<std::int64_t> integer_symbols(std::span<const double> x) {
  std::vector<std::int64_t> s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || x[i] != std::round(x[i]))
      throw InvalidParameter(Axis::Complexity, "LempelZiv76 needs integer symbols; set an encoder for real data");
    s[i] = static_cast<std::int64_t>(x[i]);
  }
  return s;
}

// Jensen-Shannon divergence (nats) between p and the uniform PMF.
inline double js_to_uniform(std::span<const double> p) {
  const double u = 1.0 / static_cast<double>(p.size());
  double d = 0.0;
  for (double v : p) {
    const double mix = 0.5 * (v + u);
    if (v > 0.0) d += 0.5 * v * std::log(v / mix);
    d += 0.5 * u * std::log(u / mix);
  }
  return std::max(d, 0.0);
}

// Same divergence for a delta PMF: the maximum over all PMFs of size L.
inline double js_delta_to_uniform(std::uint64_t outcomes) {
  const double L = static_cast<double>(outcomes);
  const double u = 1.0 / L;
  const double top = 0.5 * (1.0 + u);
  return 0.5 * std::log(1.0 / top) + 0.5 * u * std::log(u / top) + 0.5 * (L - 1.0) * u * std::log(2.0);
}

inline double euclid_to_uniform(std::span<const double> p) {
  const double u = 1.0 / static_cast<double>(p.size());
  double s = 0.0;
  for (double v : p) s += (v - u) * (v - u);
  return std::sqrt(s);
}

inline double renyi2_nats(const OutcomeSpace& o, const DataView& data) {
  const auto p = probabilities(RelativeAmount{}, o, data);
  return measure_value(Renyi{2.0, std::numbers::e}, p);
}

}  // namespace detail

// Fills data-dependent defaults (tolerances) from the given series.
inline ComplexityEstimator resolve_defaults(ComplexityEstimator e, const DataView& data) {
  std::visit(
      [&](auto& s) {
        if constexpr (requires { s.r; }) {
          if (!s.r) s.r = detail::default_tolerance(data.series());
        }
      },
      e);
  return e;
}

inline void validate(const ComplexityEstimator& e) {
  using detail::Overloaded;
  std::visit(Overloaded{
                 [](const ApproximateEntropy& s) {
                   if (s.m < 1 || s.tau < 1) throw InvalidParameter(Axis::Complexity, "m and tau must be >= 1");
                   if (s.r) detail::check_tolerance(*s.r);
                 },
                 [](const SampleEntropy& s) {
                   if (s.m < 1 || s.tau < 1) throw InvalidParameter(Axis::Complexity, "m and tau must be >= 1");
                   if (s.r) detail::check_tolerance(*s.r);
                 },
                 [](const LempelZiv76& s) {
                   if (s.encoder) validate(*s.encoder);
                 },
                 [](const ReverseDispersion& s) { validate(OutcomeSpace(Dispersion{s.m, s.tau, s.c})); },
                 [](const MissingOutcomes& s) { validate(s.space); },
                 [](const StatisticalComplexity& s) {
                   validate(s.space);
                   validate(s.probabilities);
                   validate(s.estimator);
                   if (!is_normalizable(s.estimator.definition))
                     throw Incompatible(Axis::Complexity, "statistical complexity needs a normalizable measure");
                 },
                 [](const BubbleEntropy& s) {
                   if (s.m < 2 || s.tau < 1) throw InvalidParameter(Axis::Complexity, "BubbleEntropy needs m >= 2");
                 },
             },
             e);
}

inline MeasureResult complexity(const ComplexityEstimator& est, const DataView& data) {
  validate(est);
  const ComplexityEstimator resolved = resolve_defaults(est, data);
  MeasureResult res;
  res.recipe = "complexity(" + describe(resolved) + ")";
  res.n_samples = data.length();
  using detail::Overloaded;
  res.value = std::visit(
      Overloaded{
          [&](const ApproximateEntropy& s) {
            auto x = data.series();
            require_finite(x, Axis::Complexity);
            detail::check_tolerance(*s.r);
            const std::size_t need = s.m * s.tau + 1;
            if (x.size() < need) throw InputTooShort(Axis::Complexity, need, x.size());
            return detail::approximate_entropy_phi(x, s.m, *s.r, s.tau) -
                   detail::approximate_entropy_phi(x, s.m + 1, *s.r, s.tau);
          },
          [&](const SampleEntropy& s) {
            auto x = data.series();
            require_finite(x, Axis::Complexity);
            detail::check_tolerance(*s.r);
            const auto t = sample_entropy_matches(x, s.m, *s.r, s.tau);
            if (t.b == 0) throw Undefined(Axis::Complexity, "sample entropy undefined: no m-template matches");
            if (t.a == 0) throw Undefined(Axis::Complexity, "sample entropy undefined: no (m+1)-template matches");
            return -std::log(static_cast<double>(t.a) / static_cast<double>(t.b));
          },
          [&](const LempelZiv76& s) {
            std::vector<std::int64_t> symbols;
            if (s.encoder) {
              const auto e = encode(*s.encoder, data);
              symbols.assign(e.ids.begin(), e.ids.end());
            } else {
              symbols = detail::integer_symbols(data.series());
            }
            return static_cast<double>(detail::lz76_phrases(symbols));
          },
          [&](const ReverseDispersion& s) {
            const auto p = allprobabilities(RelativeAmount{}, Dispersion{s.m, s.tau, s.c}, data);
            const double u = 1.0 / static_cast<double>(p.size());
            double acc = 0.0;
            for (double v : p.values) acc += (v - u) * (v - u);
            return acc;
          },
          [&](const MissingOutcomes& s) {
            const auto missing = missing_outcomes(s.space, data);
            return static_cast<double>(missing) / static_cast<double>(*total_outcomes(s.space, data));
          },
          [&](const StatisticalComplexity& s) {
            const double h = information_normalized(s.estimator, s.probabilities, s.space, data).value;
            const auto p = allprobabilities(s.probabilities, s.space, data);
            const auto L = static_cast<std::uint64_t>(p.size());
            double q = 0.0;
            if (s.distance == Distance::JensenShannon) {
              q = detail::js_to_uniform(p.values) / detail::js_delta_to_uniform(L);
            } else {
              q = detail::euclid_to_uniform(p.values) / std::sqrt(1.0 - 1.0 / static_cast<double>(L));
            }
            return h * std::clamp(q, 0.0, 1.0);
          },
          [&](const BubbleEntropy& s) {
            const double hm = detail::renyi2_nats(BubbleSortSwaps{s.m, s.tau}, data);
            const double hm1 = detail::renyi2_nats(BubbleSortSwaps{s.m + 1, s.tau}, data);
            return (hm1 - hm) / std::log(static_cast<double>(s.m + 1) / static_cast<double>(s.m - 1));
          },
      },
      resolved);
  return res;
}

}  // namespace cmx
