#pragma once

#include <boost/math/special_functions/digamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cmx/core.hpp"
#include "cmx/kd_tree.hpp"
#include "cmx/outcome_spaces.hpp"

namespace cmx {

// Nearest-neighbour estimator, Euclidean distance, k = 1.
struct KozachenkoLeonenko {};

// k-th neighbour estimator with the max-norm.
struct Kraskov {
  std::size_t k = 1;
};

// Sample-spacing estimators for 1-D data. Window m defaults to floor(sqrt(N)).
struct Vasicek {
  std::optional<std::size_t> m;
};
struct Ebrahimi {
  std::optional<std::size_t> m;
};
struct Correa {
  std::optional<std::size_t> m;
};
struct AlizadehArghami {
  std::optional<std::size_t> m;
};

using DifferentialEstimator = std::variant<KozachenkoLeonenko, Kraskov, Vasicek, Ebrahimi, Correa, AlizadehArghami>;

struct DifferentialResult {
  double value = 0.0;
  std::size_t clamped = 0;  // points whose log argument was raised to machine epsilon
};

inline std::string describe(const DifferentialEstimator& e) {
  using detail::Overloaded;
  auto spacing = [](const char* name, const std::optional<std::size_t>& m) {
    return std::string(name) + (m ? "(m=" + std::to_string(*m) + ")" : std::string("()"));
  };
  return std::visit(Overloaded{
                        [](const KozachenkoLeonenko&) { return std::string("KozachenkoLeonenko()"); },
                        [](const Kraskov& k) { return "Kraskov(k=" + std::to_string(k.k) + ")"; },
                        [&](const Vasicek& s) { return spacing("Vasicek", s.m); },
                        [&](const Ebrahimi& s) { return spacing("Ebrahimi", s.m); },
                        [&](const Correa& s) { return spacing("Correa", s.m); },
                        [&](const AlizadehArghami& s) { return spacing("AlizadehArghami", s.m); },
                    },
                    e);
}

inline void validate(const DifferentialEstimator& e) {
  if (const auto* k = std::get_if<Kraskov>(&e); k && k->k < 1)
    throw InvalidParameter(Axis::Estimator, "Kraskov k must be >= 1");
  std::visit(
      [](const auto& s) {
        if constexpr (requires { s.m; }) {
          if (s.m && *s.m < 1) throw InvalidParameter(Axis::Estimator, "spacing window m must be >= 1");
        }
      },
      e);
}

namespace detail {

struct LogClamp {
  std::size_t clamped = 0;
  double operator()(double x) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (x < eps) {
      ++clamped;
      x = eps;
    }
    return std::log(x);
  }
};

inline double log_unit_ball_volume(std::size_t d) {
  const double h = static_cast<double>(d) / 2.0;
  return h * std::log(std::numbers::pi) - std::lgamma(h + 1.0);
}

// H = psi(N) - psi(k) + log V + (d/N) sum log r_k(i), with r_k the distance to
// the k-th neighbour and V the volume of the unit ball of the metric scaled
// so that r is a radius.
template <class Metric>
DifferentialResult nearest_neighbour_entropy(const StateSpaceSet& pts, std::size_t k, double log_volume) {
  const std::size_t n = pts.size();
  if (n < k + 1) throw InputTooShort(Axis::Estimator, k + 1, n);
  KdTree<Metric> tree(pts);
  LogClamp lg;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += lg(tree.kth_distance(i, k));
  const double d = static_cast<double>(pts.dimension());
  const double dn = static_cast<double>(n);
  DifferentialResult r;
  r.value = boost::math::digamma(dn) - boost::math::digamma(static_cast<double>(k)) + log_volume + d * acc / dn;
  r.clamped = lg.clamped;
  return r;
}

inline std::vector<double> sorted_copy(const DataView& data) {
  std::vector<double> x;
  if (data.is_series()) {
    auto s = data.series();
    x.assign(s.begin(), s.end());
  } else if (data.is_set()) {
    if (data.set().dimension() != 1)
      throw Incompatible(Axis::Estimator, "spacing estimators need 1-D input");
    x = data.set().raw();
  } else {
    throw Incompatible(Axis::Estimator, "spacing estimators need 1-D input");
  }
  require_finite(x, Axis::Estimator);
  std::sort(x.begin(), x.end());
  return x;
}

inline std::size_t spacing_window(const std::optional<std::size_t>& m, std::size_t n) {
  const std::size_t w =
      m.value_or(std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))))));
  if (2 * w >= n) throw InputTooShort(Axis::Estimator, 2 * w + 1, n);
  return w;
}

// X_(j) with 1-based j clamped into [1, n].
inline double order_stat(const std::vector<double>& x, std::ptrdiff_t j) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  return x[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(j, 1, n) - 1)];
}

// (1/n) sum log( n / (c_i m) * (X_(i+m) - X_(i-m)) ), with c_i from `weight`.
template <class W>
DifferentialResult spacing_entropy(const std::vector<double>& x, std::size_t m, W&& weight) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  const auto mm = static_cast<std::ptrdiff_t>(m);
  LogClamp lg;
  double acc = 0.0;
  for (std::ptrdiff_t i = 1; i <= n; ++i) {
    const double spread = order_stat(x, i + mm) - order_stat(x, i - mm);
    acc += lg(static_cast<double>(n) / (weight(i) * static_cast<double>(m)) * spread);
  }
  return {acc / static_cast<double>(n), lg.clamped};
}

}  // namespace detail

// Differential Shannon entropy in nats (divide by log(base) for other units).
inline DifferentialResult entropy_differential_diag(const DifferentialEstimator& est, const DataView& data) {
  validate(est);
  using detail::Overloaded;
  auto as_set = [&]() -> StateSpaceSet {
    if (data.is_series()) return StateSpaceSet::from_series(data.series());
    if (data.is_set()) return data.set();
    throw Incompatible(Axis::Estimator, "differential estimators need a timeseries or a StateSpaceSet");
  };
  return std::visit(
      Overloaded{
          [&](const KozachenkoLeonenko&) {
            const auto pts = as_set();
            require_finite(pts.raw(), Axis::Estimator);
            return detail::nearest_neighbour_entropy<Euclidean>(pts, 1,
                                                                detail::log_unit_ball_volume(pts.dimension()));
          },
          [&](const Kraskov& k) {
            const auto pts = as_set();
            require_finite(pts.raw(), Axis::Estimator);
            // Max-norm ball of radius r has volume (2r)^d.
            return detail::nearest_neighbour_entropy<Chebyshev>(
                pts, k.k, static_cast<double>(pts.dimension()) * std::numbers::ln2);
          },
          [&](const Vasicek& s) {
            const auto x = detail::sorted_copy(data);
            const std::size_t m = detail::spacing_window(s.m, x.size());
            return detail::spacing_entropy(x, m, [](std::ptrdiff_t) { return 2.0; });
          },
          [&](const Ebrahimi& s) {
            const auto x = detail::sorted_copy(data);
            const std::size_t m = detail::spacing_window(s.m, x.size());
            const auto n = static_cast<std::ptrdiff_t>(x.size());
            const auto mm = static_cast<std::ptrdiff_t>(m);
            return detail::spacing_entropy(x, m, [&](std::ptrdiff_t i) {
              if (i <= mm) return 1.0 + static_cast<double>(i - 1) / static_cast<double>(m);
              if (i >= n - mm + 1) return 1.0 + static_cast<double>(n - i) / static_cast<double>(m);
              return 2.0;
            });
          },
          [&](const AlizadehArghami& s) {
            const auto x = detail::sorted_copy(data);
            const std::size_t m = detail::spacing_window(s.m, x.size());
            const auto n = static_cast<std::ptrdiff_t>(x.size());
            const auto mm = static_cast<std::ptrdiff_t>(m);
            return detail::spacing_entropy(x, m, [&](std::ptrdiff_t i) { return (i <= mm || i > n - mm) ? 1.0 : 2.0; });
          },
          [&](const Correa& s) {
            const auto x = detail::sorted_copy(data);
            const std::size_t m = detail::spacing_window(s.m, x.size());
            const auto n = static_cast<std::ptrdiff_t>(x.size());
            const auto mm = static_cast<std::ptrdiff_t>(m);
            detail::LogClamp lg;
            double acc = 0.0;
            for (std::ptrdiff_t i = 1; i <= n; ++i) {
              double local_mean = 0.0;
              for (std::ptrdiff_t j = i - mm; j <= i + mm; ++j) local_mean += detail::order_stat(x, j);
              local_mean /= static_cast<double>(2 * m + 1);
              double num = 0.0, den = 0.0;
              for (std::ptrdiff_t j = i - mm; j <= i + mm; ++j) {
                const double dev = detail::order_stat(x, j) - local_mean;
                num += static_cast<double>(j - i) * dev;
                den += dev * dev;
              }
              // Slope of the order statistics against rank, scaled by n.
              acc += lg(den > 0.0 ? num / (static_cast<double>(n) * den) : 0.0);
            }
            return DifferentialResult{-acc / static_cast<double>(n), lg.clamped};
          },
      },
      est);
}

inline double entropy_differential(const DifferentialEstimator& est, const DataView& data,
                                   double base = std::numbers::e) {
  if (!(base > 1.0)) throw InvalidParameter(Axis::Estimator, "logarithm base must be > 1");
  return entropy_differential_diag(est, data).value / std::log(base);
}

}  // namespace cmx
