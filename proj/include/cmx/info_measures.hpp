#pragma once

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <variant>

#include "cmx/core.hpp"
#include "cmx/outcome_spaces.hpp"

namespace cmx {

// Information measure definitions: functionals of a PMF.
//
//   Shannon               -sum p log_b p
//   Renyi                 log_b(sum p^q) / (1 - q)
//   Tsallis               k (1 - sum p^q) / (q - 1)
//   Kaniadakis            -sum p ln_k(p),  ln_k(x) = (x^k - x^-k) / (2k)
//   Curado                sum (1 - exp(-b p)) + exp(-b) - 1
//   StretchedExponential  sum [Gamma(r, -ln p) - p Gamma(r)] / ln b,  r = (eta + 1) / eta
//   ShannonExtropy        -sum (1 - p) log_b (1 - p)
//   RenyiExtropy          [(L-1) log_b sum (1-p)^q - (L-1) log_b (L-1)] / (1 - q)
//   TsallisExtropy        k (L - 1 - sum (1-p)^q) / (q - 1)
//   FluctuationComplexity sqrt(sum p (I(p) - H)^2), I the inner measure's
//                         pointwise information and H = sum p I(p)
//
// Terms with p = 0 follow the continuous extension (0 log 0 = 0).

struct Shannon {
  double base = 2.0;
};

struct Renyi {
  double q = 2.0;
  double base = 2.0;
};

struct Tsallis {
  double q = 2.0;
  double k = 1.0;
};

struct Kaniadakis {
  double kappa = 0.5;
};

struct Curado {
  double b = 1.0;
};

struct StretchedExponential {
  double eta = 2.0;
  double base = 2.0;
};

struct ShannonExtropy {
  double base = 2.0;
};

struct RenyiExtropy {
  double q = 2.0;
  double base = 2.0;
};

struct TsallisExtropy {
  double q = 2.0;
  double k = 1.0;
};

// Measures with an additive pointwise information content, usable inside
// FluctuationComplexity.
using PointwiseMeasure = std::variant<Shannon, Tsallis, Kaniadakis, Curado, StretchedExponential>;

struct FluctuationComplexity {
  PointwiseMeasure inner = Shannon{};
};

using InfoMeasure = std::variant<Shannon, Renyi, Tsallis, Kaniadakis, Curado, StretchedExponential, ShannonExtropy,
                                 RenyiExtropy, TsallisExtropy, FluctuationComplexity>;

inline std::string describe(const PointwiseMeasure& m);

inline std::string describe(const InfoMeasure& m) {
  using detail::fmt_real;
  using detail::Overloaded;
  return std::visit(
      Overloaded{
          [](const Shannon& s) { return "Shannon(base=" + fmt_real(s.base) + ")"; },
          [](const Renyi& s) { return "Renyi(q=" + fmt_real(s.q) + ", base=" + fmt_real(s.base) + ")"; },
          [](const Tsallis& s) { return "Tsallis(q=" + fmt_real(s.q) + ", k=" + fmt_real(s.k) + ")"; },
          [](const Kaniadakis& s) { return "Kaniadakis(kappa=" + fmt_real(s.kappa) + ")"; },
          [](const Curado& s) { return "Curado(b=" + fmt_real(s.b) + ")"; },
          [](const StretchedExponential& s) {
            return "StretchedExponential(eta=" + fmt_real(s.eta) + ", base=" + fmt_real(s.base) + ")";
          },
          [](const ShannonExtropy& s) { return "ShannonExtropy(base=" + fmt_real(s.base) + ")"; },
          [](const RenyiExtropy& s) { return "RenyiExtropy(q=" + fmt_real(s.q) + ", base=" + fmt_real(s.base) + ")"; },
          [](const TsallisExtropy& s) { return "TsallisExtropy(q=" + fmt_real(s.q) + ", k=" + fmt_real(s.k) + ")"; },
          [](const FluctuationComplexity& s) { return "FluctuationComplexity(inner=" + describe(s.inner) + ")"; },
      },
      m);
}

inline std::string describe(const PointwiseMeasure& m) {
  return std::visit([](const auto& v) { return describe(InfoMeasure(v)); }, m);
}

namespace detail {

inline void check_base(double b) {
  if (!(b > 1.0) || !std::isfinite(b)) throw InvalidParameter(Axis::Measure, "logarithm base must be > 1");
}

inline void check_q(double q, bool positive) {
  if (!std::isfinite(q) || q == 1.0 || (positive && !(q > 0.0)))
    throw InvalidParameter(Axis::Measure, positive ? "q must be > 0 and != 1" : "q must be != 1");
}

}  // namespace detail

inline void validate(const InfoMeasure& m) {
  using detail::Overloaded;
  std::visit(Overloaded{
                 [](const Shannon& s) { detail::check_base(s.base); },
                 [](const Renyi& s) {
                   detail::check_q(s.q, true);
                   detail::check_base(s.base);
                 },
                 [](const Tsallis& s) {
                   detail::check_q(s.q, false);
                   if (!(s.k > 0.0)) throw InvalidParameter(Axis::Measure, "Tsallis k must be > 0");
                 },
                 [](const Kaniadakis& s) {
                   if (!(s.kappa > -1.0 && s.kappa < 1.0) || s.kappa == 0.0)
                     throw InvalidParameter(Axis::Measure, "Kaniadakis kappa must be in (-1, 1) and != 0");
                 },
                 [](const Curado& s) {
                   if (!(s.b > 0.0)) throw InvalidParameter(Axis::Measure, "Curado b must be > 0");
                 },
                 [](const StretchedExponential& s) {
                   if (!(s.eta > 0.0)) throw InvalidParameter(Axis::Measure, "StretchedExponential eta must be > 0");
                   detail::check_base(s.base);
                 },
                 [](const ShannonExtropy& s) { detail::check_base(s.base); },
                 [](const RenyiExtropy& s) {
                   detail::check_q(s.q, true);
                   detail::check_base(s.base);
                 },
                 [](const TsallisExtropy& s) {
                   detail::check_q(s.q, false);
                   if (!(s.k > 0.0)) throw InvalidParameter(Axis::Measure, "TsallisExtropy k must be > 0");
                 },
                 [](const FluctuationComplexity& s) {
                   std::visit([](const auto& inner) { validate(InfoMeasure(inner)); }, s.inner);
                 },
             },
             m);
}

namespace detail {

inline double log_base(double x, double base) { return std::log(x) / std::log(base); }

// Sum over p_i > 0 of f(p_i).
template <class F>
double sum_positive(std::span<const double> p, F&& f) {
  double s = 0.0;
  for (double v : p)
    if (v > 0.0) s += f(v);
  return s;
}

inline double gamma_r(double eta) { return (eta + 1.0) / eta; }

// Pointwise information content; sum_i p_i * I(p_i) is the measure itself.
inline double pointwise_information(const PointwiseMeasure& m, double p) {
  return std::visit(
      Overloaded{
          [&](const Shannon& s) { return -log_base(p, s.base); },
          [&](const Tsallis& s) { return s.k * (1.0 - std::pow(p, s.q - 1.0)) / (s.q - 1.0); },
          [&](const Kaniadakis& s) { return (std::pow(p, -s.kappa) - std::pow(p, s.kappa)) / (2.0 * s.kappa); },
          [&](const Curado& s) { return (1.0 - std::exp(-s.b * p)) / p + std::exp(-s.b) - 1.0; },
          [&](const StretchedExponential& s) {
            const double r = gamma_r(s.eta);
            return (boost::math::tgamma(r, -std::log(p)) / p - boost::math::tgamma(r)) / std::log(s.base);
          },
      },
      m);
}

}  // namespace detail

// Value of the functional. `total` is the size of the outcome space; entries
// missing from `p` are zero-probability outcomes (only RenyiExtropy and
// TsallisExtropy depend on them). Defaults to p.size().
inline double measure_value(const InfoMeasure& m, const Probabilities& pmf, std::uint64_t total = 0) {
  validate(m);
  require_pmf(pmf);
  const std::span<const double> p(pmf.values);
  const double L = static_cast<double>(total == 0 ? p.size() : total);
  if (L < static_cast<double>(p.size())) throw InvalidParameter(Axis::Measure, "total outcomes below PMF length");
  const double zeros = L - static_cast<double>(p.size());
  using detail::log_base;
  using detail::Overloaded;
  using detail::sum_positive;
  // Adding +0.0 maps a negative zero to +0.0 and leaves other values unchanged.
  return 0.0 + std::visit(
      Overloaded{
          [&](const Shannon& s) { return -sum_positive(p, [&](double v) { return v * log_base(v, s.base); }); },
          [&](const Renyi& s) {
            const double sq = sum_positive(p, [&](double v) { return std::pow(v, s.q); });
            return log_base(sq, s.base) / (1.0 - s.q);
          },
          [&](const Tsallis& s) {
            const double sq = sum_positive(p, [&](double v) { return std::pow(v, s.q); });
            return s.k * (1.0 - sq) / (s.q - 1.0);
          },
          [&](const Kaniadakis& s) {
            return sum_positive(p, [&](double v) {
              return (std::pow(v, 1.0 - s.kappa) - std::pow(v, 1.0 + s.kappa)) / (2.0 * s.kappa);
            });
          },
          [&](const Curado& s) {
            return sum_positive(p, [&](double v) { return 1.0 - std::exp(-s.b * v); }) + std::exp(-s.b) - 1.0;
          },
          [&](const StretchedExponential& s) {
            const double r = detail::gamma_r(s.eta);
            const double g = boost::math::tgamma(r);
            // The base only rescales units; inside Gamma it would break concavity.
            return sum_positive(p, [&](double v) { return boost::math::tgamma(r, -std::log(v)) - v * g; }) /
                   std::log(s.base);
          },
          [&](const ShannonExtropy& s) {
            double acc = 0.0;
            for (double v : p)
              if (v < 1.0) acc -= (1.0 - v) * log_base(1.0 - v, s.base);
            return acc;
          },
          [&](const RenyiExtropy& s) {
            if (L <= 1.0) return 0.0;
            double sq = zeros;
            for (double v : p) sq += std::pow(1.0 - v, s.q);
            return ((L - 1.0) * log_base(sq, s.base) - (L - 1.0) * log_base(L - 1.0, s.base)) / (1.0 - s.q);
          },
          [&](const TsallisExtropy& s) {
            double sq = zeros;
            for (double v : p) sq += std::pow(1.0 - v, s.q);
            return s.k * (L - 1.0 - sq) / (s.q - 1.0);
          },
          [&](const FluctuationComplexity& s) {
            const double h = sum_positive(p, [&](double v) { return v * detail::pointwise_information(s.inner, v); });
            const double var = sum_positive(p, [&](double v) {
              const double d = detail::pointwise_information(s.inner, v) - h;
              return v * d * d;
            });
            return std::sqrt(var);
          },
      },
      m);
}

inline double measure_value(const InfoMeasure& m, std::span<const double> p, std::uint64_t total = 0) {
  return measure_value(m, Probabilities{std::vector<double>(p.begin(), p.end()), std::nullopt}, total);
}

// Whether a closed-form maximum exists (needed for normalization).
inline bool is_normalizable(const InfoMeasure& m) { return !std::holds_alternative<FluctuationComplexity>(m); }

// Maximum over all PMFs with L outcomes, attained at the uniform PMF.
inline double measure_maximum(const InfoMeasure& m, std::uint64_t outcomes) {
  validate(m);
  if (outcomes == 0) throw InvalidParameter(Axis::Measure, "number of outcomes must be >= 1");
  const double L = static_cast<double>(outcomes);
  using detail::log_base;
  using detail::Overloaded;
  return std::visit(
      Overloaded{
          [&](const Shannon& s) { return log_base(L, s.base); },
          [&](const Renyi& s) { return log_base(L, s.base); },
          [&](const Tsallis& s) { return s.k * (std::pow(L, 1.0 - s.q) - 1.0) / (1.0 - s.q); },
          [&](const Kaniadakis& s) { return (std::pow(L, s.kappa) - std::pow(L, -s.kappa)) / (2.0 * s.kappa); },
          [&](const Curado& s) { return L * (1.0 - std::exp(-s.b / L)) + std::exp(-s.b) - 1.0; },
          [&](const StretchedExponential& s) {
            const double r = detail::gamma_r(s.eta);
            return (L * boost::math::tgamma(r, std::log(L)) - boost::math::tgamma(r)) / std::log(s.base);
          },
          [&](const ShannonExtropy& s) { return L <= 1.0 ? 0.0 : (L - 1.0) * log_base(L / (L - 1.0), s.base); },
          [&](const RenyiExtropy& s) { return L <= 1.0 ? 0.0 : (L - 1.0) * log_base(L / (L - 1.0), s.base); },
          [&](const TsallisExtropy& s) {
            if (L <= 1.0) return 0.0;
            return s.k * (L - 1.0 - std::pow(L, 1.0 - s.q) * std::pow(L - 1.0, s.q)) / (s.q - 1.0);
          },
          [&](const FluctuationComplexity&) -> double {
            throw Incompatible(Axis::Measure, "FluctuationComplexity has no closed-form maximum");
          },
      },
      m);
}

// Logarithm base the measure reports in (e for measures without one).
inline double measure_base(const InfoMeasure& m) {
  using detail::Overloaded;
  return std::visit(Overloaded{
                        [](const Shannon& s) { return s.base; },
                        [](const Renyi& s) { return s.base; },
                        [](const StretchedExponential& s) { return s.base; },
                        [](const ShannonExtropy& s) { return s.base; },
                        [](const RenyiExtropy& s) { return s.base; },
                        [](const auto&) { return std::exp(1.0); },
                    },
                    m);
}

}  // namespace cmx
