#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cmx/core.hpp"
#include "cmx/embedding.hpp"
#include "cmx/lehmer.hpp"
#include "cmx/sparse_histogram.hpp"
#include "cmx/spectrum.hpp"

namespace cmx {

// ---------------------------------------------------------------------------
// Specs
// ---------------------------------------------------------------------------

struct UniqueElements {};

// Rectangular binning over the data range [min, max] of each axis, right-most
// bin closed. Exactly one of `width` / `bins` is set.
struct ValueBinning {
  std::optional<double> width;
  std::optional<std::size_t> bins;
};

struct OrdinalPatterns {
  std::size_t m = 3;
  std::size_t tau = 1;
};

struct Dispersion {
  std::size_t m = 2;
  std::size_t tau = 1;
  std::size_t c = 3;
};

struct CosineSimilarityBinning {
  std::size_t m = 2;
  std::size_t tau = 1;
  std::size_t nbins = 5;
};

struct BubbleSortSwaps {
  std::size_t m = 3;
  std::size_t tau = 1;
};

struct PowerSpectrum {};

// Pixel offsets (row, col) relative to the placement anchor.
using Stencil = std::vector<std::pair<std::ptrdiff_t, std::ptrdiff_t>>;

inline Stencil square_stencil(std::size_t side) {
  Stencil s;
  for (std::size_t r = 0; r < side; ++r)
    for (std::size_t c = 0; c < side; ++c) s.emplace_back(static_cast<std::ptrdiff_t>(r), static_cast<std::ptrdiff_t>(c));
  return s;
}

struct SpatialOrdinalPatterns {
  Stencil stencil = square_stencil(2);
};

struct SpatialDispersion {
  Stencil stencil = square_stencil(2);
  std::size_t c = 3;
};

using OutcomeSpace = std::variant<UniqueElements, ValueBinning, OrdinalPatterns, Dispersion, CosineSimilarityBinning,
                                  BubbleSortSwaps, PowerSpectrum, SpatialOrdinalPatterns, SpatialDispersion>;

// Non-owning view over the three input shapes the spaces accept.
class DataView {
 public:
  DataView(std::span<const double> x) : v_(x) {}
  DataView(const std::vector<double>& x) : v_(std::span<const double>(x)) {}
  DataView(const StateSpaceSet& s) : v_(&s) {}
  DataView(const Matrix& m) : v_(&m) {}

  bool is_series() const { return std::holds_alternative<std::span<const double>>(v_); }
  bool is_set() const { return std::holds_alternative<const StateSpaceSet*>(v_); }
  bool is_matrix() const { return std::holds_alternative<const Matrix*>(v_); }

  std::span<const double> series() const {
    if (!is_series()) throw Incompatible(Axis::OutcomeSpace, "this operation expects a 1-D timeseries");
    return std::get<std::span<const double>>(v_);
  }
  const StateSpaceSet& set() const { return *std::get<const StateSpaceSet*>(v_); }
  const Matrix& matrix() const {
    if (!is_matrix()) throw Incompatible(Axis::OutcomeSpace, "spatial outcome spaces expect a 2-D array");
    return *std::get<const Matrix*>(v_);
  }
  // Number of raw samples (points for sets, pixels for matrices).
  std::size_t length() const {
    if (is_series()) return series().size();
    if (is_set()) return set().size();
    return matrix().rows() * matrix().cols();
  }

 private:
  std::variant<std::span<const double>, const StateSpaceSet*, const Matrix*> v_;
};

struct EncodedSymbols {
  std::vector<OutcomeId> ids;
  std::optional<std::uint64_t> total_outcomes;
};

// ---------------------------------------------------------------------------
// Description and validation
// ---------------------------------------------------------------------------

namespace detail {

inline std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt_stencil(const Stencil& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ", ";
    out += "(" + std::to_string(s[i].first) + ", " + std::to_string(s[i].second) + ")";
  }
  return out + "]";
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace detail

inline std::string describe(const OutcomeSpace& o) {
  using detail::Overloaded;
  return std::visit(
      Overloaded{
          [](const UniqueElements&) { return std::string("UniqueElements()"); },
          [](const ValueBinning& b) {
            return b.width ? "ValueBinning(width=" + detail::fmt_real(*b.width) + ")"
                           : "ValueBinning(bins=" + std::to_string(b.bins.value_or(0)) + ")";
          },
          [](const OrdinalPatterns& s) {
            return "OrdinalPatterns(m=" + std::to_string(s.m) + ", tau=" + std::to_string(s.tau) + ")";
          },
          [](const Dispersion& s) {
            return "Dispersion(m=" + std::to_string(s.m) + ", tau=" + std::to_string(s.tau) +
                   ", c=" + std::to_string(s.c) + ")";
          },
          [](const CosineSimilarityBinning& s) {
            return "CosineSimilarityBinning(m=" + std::to_string(s.m) + ", tau=" + std::to_string(s.tau) +
                   ", nbins=" + std::to_string(s.nbins) + ")";
          },
          [](const BubbleSortSwaps& s) {
            return "BubbleSortSwaps(m=" + std::to_string(s.m) + ", tau=" + std::to_string(s.tau) + ")";
          },
          [](const PowerSpectrum&) { return std::string("PowerSpectrum()"); },
          [](const SpatialOrdinalPatterns& s) {
            return "SpatialOrdinalPatterns(stencil=" + detail::fmt_stencil(s.stencil) + ")";
          },
          [](const SpatialDispersion& s) {
            return "SpatialDispersion(stencil=" + detail::fmt_stencil(s.stencil) + ", c=" + std::to_string(s.c) + ")";
          },
      },
      o);
}

namespace detail {

inline void check_stencil(const Stencil& s) {
  if (s.size() < 2 || s.size() > kMaxPermutationLength)
    throw InvalidParameter(Axis::OutcomeSpace, "stencil must have between 2 and 12 offsets");
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (s[i] == s[j]) throw InvalidParameter(Axis::OutcomeSpace, "stencil offsets must be distinct");
}

inline void check_tau(std::size_t tau) {
  if (tau < 1) throw InvalidParameter(Axis::OutcomeSpace, "tau must be >= 1");
}

}  // namespace detail

inline void validate(const OutcomeSpace& o) {
  using detail::Overloaded;
  std::visit(Overloaded{
                 [](const UniqueElements&) {},
                 [](const ValueBinning& b) {
                   if (b.width.has_value() == b.bins.has_value())
                     throw InvalidParameter(Axis::OutcomeSpace, "ValueBinning needs exactly one of width or bins");
                   if (b.width && !(*b.width > 0.0 && std::isfinite(*b.width)))
                     throw InvalidParameter(Axis::OutcomeSpace, "ValueBinning width must be > 0");
                   if (b.bins && *b.bins < 1) throw InvalidParameter(Axis::OutcomeSpace, "ValueBinning bins must be >= 1");
                 },
                 [](const OrdinalPatterns& s) {
                   if (s.m < 2 || s.m > kMaxPermutationLength)
                     throw InvalidParameter(Axis::OutcomeSpace, "OrdinalPatterns m must be in 2..12");
                   detail::check_tau(s.tau);
                 },
                 [](const Dispersion& s) {
                   if (s.m < 1) throw InvalidParameter(Axis::OutcomeSpace, "Dispersion m must be >= 1");
                   if (s.c < 2) throw InvalidParameter(Axis::OutcomeSpace, "Dispersion c must be >= 2");
                   detail::check_tau(s.tau);
                 },
                 [](const CosineSimilarityBinning& s) {
                   if (s.m < 2) throw InvalidParameter(Axis::OutcomeSpace, "CosineSimilarityBinning m must be >= 2");
                   if (s.nbins < 1) throw InvalidParameter(Axis::OutcomeSpace, "CosineSimilarityBinning nbins must be >= 1");
                   detail::check_tau(s.tau);
                 },
                 [](const BubbleSortSwaps& s) {
                   if (s.m < 2) throw InvalidParameter(Axis::OutcomeSpace, "BubbleSortSwaps m must be >= 2");
                   detail::check_tau(s.tau);
                 },
                 [](const PowerSpectrum&) {},
                 [](const SpatialOrdinalPatterns& s) { detail::check_stencil(s.stencil); },
                 [](const SpatialDispersion& s) {
                   detail::check_stencil(s.stencil);
                   if (s.c < 2) throw InvalidParameter(Axis::OutcomeSpace, "SpatialDispersion c must be >= 2");
                 },
             },
             o);
}

// Counting-based spaces produce integer occurrence counts; PowerSpectrum
// produces normalized spectral power directly.
inline bool is_counting(const OutcomeSpace& o) { return !std::holds_alternative<PowerSpectrum>(o); }

inline bool is_spatial(const OutcomeSpace& o) {
  return std::holds_alternative<SpatialOrdinalPatterns>(o) || std::holds_alternative<SpatialDispersion>(o);
}

namespace detail {

inline std::uint64_t checked_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (r > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()) / base)
      throw CardinalityOverflow(Axis::OutcomeSpace, "outcome space cardinality exceeds 2^63-1");
    r *= base;
  }
  return r;
}

}  // namespace detail

// Cardinality known from the spec alone; nullopt when it depends on the data
// (UniqueElements, PowerSpectrum, ValueBinning).
inline std::optional<std::uint64_t> total_outcomes(const OutcomeSpace& o) {
  validate(o);
  using detail::Overloaded;
  return std::visit(
      Overloaded{
          [](const UniqueElements&) -> std::optional<std::uint64_t> { return std::nullopt; },
          [](const ValueBinning&) -> std::optional<std::uint64_t> { return std::nullopt; },
          [](const OrdinalPatterns& s) -> std::optional<std::uint64_t> { return factorial(s.m); },
          [](const Dispersion& s) -> std::optional<std::uint64_t> { return detail::checked_pow(s.c, s.m); },
          [](const CosineSimilarityBinning& s) -> std::optional<std::uint64_t> { return s.nbins; },
          [](const BubbleSortSwaps& s) -> std::optional<std::uint64_t> { return s.m * (s.m - 1) / 2 + 1; },
          [](const PowerSpectrum&) -> std::optional<std::uint64_t> { return std::nullopt; },
          [](const SpatialOrdinalPatterns& s) -> std::optional<std::uint64_t> { return factorial(s.stencil.size()); },
          [](const SpatialDispersion& s) -> std::optional<std::uint64_t> {
            return detail::checked_pow(s.c, s.stencil.size());
          },
      },
      o);
}

// ---------------------------------------------------------------------------
// Symbolization kernels
// ---------------------------------------------------------------------------

namespace detail {

// Stable argsort of a short window by insertion sort: ties keep index order,
// so the earlier index ranks lower.
template <std::size_t M>
inline void stable_argsort(const std::array<double, M>& v, std::array<std::uint8_t, M>& perm) {
  for (std::size_t i = 0; i < M; ++i) perm[i] = static_cast<std::uint8_t>(i);
  for (std::size_t i = 1; i < M; ++i) {
    const std::uint8_t p = perm[i];
    std::size_t j = i;
    while (j > 0 && v[perm[j - 1]] > v[p]) {
      perm[j] = perm[j - 1];
      --j;
    }
    perm[j] = p;
  }
}

template <std::size_t M>
inline OutcomeId ordinal_id(const std::array<double, M>& w) {
  std::array<std::uint8_t, M> perm;
  stable_argsort<M>(w, perm);
  return lehmer_rank(perm, M);
}

template <std::size_t M>
void encode_ordinal_fixed(std::span<const double> x, std::size_t tau, std::vector<OutcomeId>& ids) {
  const std::size_t n = embedded_length(x.size(), EmbeddingSpec{M, tau});
  ids.resize(n);
  std::array<double, M> w;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < M; ++k) w[k] = x[i + k * tau];
    ids[i] = ordinal_id<M>(w);
  }
}

// Dispatches a runtime length 2..12 onto the fixed-size kernel.
template <template <std::size_t> class K, class... Args>
auto dispatch_length(std::size_t m, Args&&... args) {
  switch (m) {
    case 2: return K<2>{}(std::forward<Args>(args)...);
    case 3: return K<3>{}(std::forward<Args>(args)...);
    case 4: return K<4>{}(std::forward<Args>(args)...);
    case 5: return K<5>{}(std::forward<Args>(args)...);
    case 6: return K<6>{}(std::forward<Args>(args)...);
    case 7: return K<7>{}(std::forward<Args>(args)...);
    case 8: return K<8>{}(std::forward<Args>(args)...);
    case 9: return K<9>{}(std::forward<Args>(args)...);
    case 10: return K<10>{}(std::forward<Args>(args)...);
    case 11: return K<11>{}(std::forward<Args>(args)...);
    case 12: return K<12>{}(std::forward<Args>(args)...);
    default: throw InvalidParameter(Axis::OutcomeSpace, "pattern length must be in 2..12");
  }
}

template <std::size_t M>
struct OrdinalKernel {
  void operator()(std::span<const double> x, std::size_t tau, std::vector<OutcomeId>& ids) const {
    encode_ordinal_fixed<M>(x, tau, ids);
  }
};

template <std::size_t M>
struct GatheredOrdinalKernel {
  // values: K gathered values per placement, contiguous.
  void operator()(std::span<const double> values, std::vector<OutcomeId>& ids) const {
    const std::size_t n = values.size() / M;
    ids.resize(n);
    std::array<double, M> w;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < M; ++k) w[k] = values[i * M + k];
      ids[i] = ordinal_id<M>(w);
    }
  }
};

inline double gaussian_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Maps each value to a 0-based dispersion category in [0, c).
inline std::vector<std::uint32_t> dispersion_symbols(std::span<const double> x, std::size_t c) {
  const double mu = mean(x);
  const double sd = sample_std(x);
  std::vector<std::uint32_t> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double y = sd > 0.0 ? gaussian_cdf((x[i] - mu) / sd) : 0.5;
    const auto k = static_cast<std::size_t>(std::floor(y * static_cast<double>(c)));
    z[i] = static_cast<std::uint32_t>(std::min(k, c - 1));
  }
  return z;
}

inline std::size_t inversions(std::span<const double> w) {
  std::size_t swaps = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j) swaps += w[i] > w[j];
  return swaps;
}

inline double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  if (na == 0.0 && nb == 0.0) return 1.0;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

struct Placements {
  std::size_t r0, r1, c0, c1;  // anchor ranges [r0, r1) x [c0, c1)
  std::size_t count() const { return (r1 - r0) * (c1 - c0); }
};

inline Placements stencil_placements(const Stencil& s, const Matrix& a) {
  std::ptrdiff_t rmin = 0, rmax = 0, cmin = 0, cmax = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto [dr, dc] = s[i];
    if (i == 0 || dr < rmin) rmin = dr;
    if (i == 0 || dr > rmax) rmax = dr;
    if (i == 0 || dc < cmin) cmin = dc;
    if (i == 0 || dc > cmax) cmax = dc;
  }
  const auto rows = static_cast<std::ptrdiff_t>(a.rows());
  const auto cols = static_cast<std::ptrdiff_t>(a.cols());
  const std::ptrdiff_t r0 = -rmin, r1 = rows - rmax, c0 = -cmin, c1 = cols - cmax;
  if (r1 <= r0 || c1 <= c0)
    throw InputTooShort(Axis::OutcomeSpace, static_cast<std::size_t>((rmax - rmin + 1) * (cmax - cmin + 1)),
                        a.rows() * a.cols());
  return {static_cast<std::size_t>(r0), static_cast<std::size_t>(r1), static_cast<std::size_t>(c0),
          static_cast<std::size_t>(c1)};
}

// Stencil-gathered values, placements in row-major anchor order.
inline std::vector<double> gather_stencil(const Stencil& s, const Matrix& a, const Placements& p) {
  std::vector<double> out;
  out.reserve(p.count() * s.size());
  for (std::size_t r = p.r0; r < p.r1; ++r)
    for (std::size_t c = p.c0; c < p.c1; ++c)
      for (const auto& [dr, dc] : s)
        out.push_back(a(static_cast<std::size_t>(static_cast<std::ptrdiff_t>(r) + dr),
                        static_cast<std::size_t>(static_cast<std::ptrdiff_t>(c) + dc)));
  return out;
}

struct AxisBins {
  double lo;
  double width;  // 0 when the axis range is degenerate
  std::uint64_t count;
  std::int64_t index(double v) const {
    if (width <= 0.0) return 0;
    const double k = std::floor((v - lo) / width);
    const auto last = static_cast<std::int64_t>(count) - 1;
    return std::min<std::int64_t>(std::max<std::int64_t>(static_cast<std::int64_t>(k), 0), last);
  }
};

inline std::vector<AxisBins> value_bins(const ValueBinning& b, const StateSpaceSet& pts) {
  const std::size_t d = pts.dimension();
  std::vector<AxisBins> axes(d);
  for (std::size_t k = 0; k < d; ++k) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      lo = std::min(lo, pts[i][k]);
      hi = std::max(hi, pts[i][k]);
    }
    const double range = hi - lo;
    if (b.width) {
      const double n = range > 0.0 ? std::max(1.0, std::ceil(range / *b.width)) : 1.0;
      if (n >= 9.0e18) throw CardinalityOverflow(Axis::OutcomeSpace, "bin count exceeds 64-bit range");
      axes[k] = AxisBins{lo, range > 0.0 ? *b.width : 0.0, static_cast<std::uint64_t>(n)};
    } else {
      axes[k] = AxisBins{lo, range > 0.0 ? range / static_cast<double>(*b.bins) : 0.0, *b.bins};
    }
  }
  return axes;
}

inline StateSpaceSet as_points(const DataView& data) {
  if (data.is_series()) return StateSpaceSet::from_series(data.series());
  if (data.is_set()) return data.set();
  throw Incompatible(Axis::OutcomeSpace, "binning expects a timeseries or a StateSpaceSet");
}

inline BinnedCounts value_binning_counts(const ValueBinning& b, const DataView& data) {
  StateSpaceSet pts = as_points(data);
  if (pts.empty()) throw InputTooShort(Axis::OutcomeSpace, 1, 0);
  require_finite(pts.raw(), Axis::OutcomeSpace);
  const auto axes = value_bins(b, pts);
  const std::size_t n = pts.size(), d = pts.dimension();
  std::vector<std::int64_t> coords(n * d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k) coords[i * d + k] = axes[k].index(pts[i][k]);
  std::vector<std::uint64_t> per_axis(d);
  for (std::size_t k = 0; k < d; ++k) per_axis[k] = axes[k].count;
  return count_occupied_bins(coords, n, d, per_axis);
}

inline std::vector<double> sorted_unique(std::span<const double> x) {
  std::vector<double> u(x.begin(), x.end());
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  return u;
}

inline std::span<const double> checked_series(const DataView& data) {
  auto x = data.series();
  require_finite(x, Axis::OutcomeSpace);
  return x;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Encoding
// ---------------------------------------------------------------------------

// One id per window (timeseries spaces), per point (UniqueElements,
// ValueBinning) or per stencil placement (spatial spaces).
inline EncodedSymbols encode(const OutcomeSpace& o, const DataView& data) {
  validate(o);
  using detail::Overloaded;
  return std::visit(
      Overloaded{
          [&](const UniqueElements&) {
            auto x = detail::checked_series(data);
            if (x.empty()) throw InputTooShort(Axis::OutcomeSpace, 1, 0);
            const auto u = detail::sorted_unique(x);
            EncodedSymbols e;
            e.ids.reserve(x.size());
            for (double v : x)
              e.ids.push_back(static_cast<OutcomeId>(std::lower_bound(u.begin(), u.end(), v) - u.begin()));
            e.total_outcomes = u.size();
            return e;
          },
          [&](const ValueBinning& b) {
            StateSpaceSet pts = detail::as_points(data);
            if (pts.empty()) throw InputTooShort(Axis::OutcomeSpace, 1, 0);
            require_finite(pts.raw(), Axis::OutcomeSpace);
            const auto axes = detail::value_bins(b, pts);
            std::vector<std::uint64_t> per_axis;
            for (const auto& a : axes) per_axis.push_back(a.count);
            const auto total = detail::checked_product(per_axis);
            if (!total)
              throw CardinalityOverflow(Axis::OutcomeSpace,
                                        "binning has more than 2^63-1 cells; use counts() for sparse results");
            EncodedSymbols e;
            e.total_outcomes = total;
            e.ids.resize(pts.size());
            for (std::size_t i = 0; i < pts.size(); ++i) {
              OutcomeId id = 0;
              for (std::size_t k = 0; k < axes.size(); ++k)
                id = id * axes[k].count + static_cast<OutcomeId>(axes[k].index(pts[i][k]));
              e.ids[i] = id;
            }
            return e;
          },
          [&](const OrdinalPatterns& s) {
            auto x = detail::checked_series(data);
            EncodedSymbols e;
            detail::dispatch_length<detail::OrdinalKernel>(s.m, x, s.tau, e.ids);
            e.total_outcomes = factorial(s.m);
            return e;
          },
          [&](const Dispersion& s) {
            auto x = detail::checked_series(data);
            const std::size_t n = embedded_length(x.size(), EmbeddingSpec{s.m, s.tau});
            const auto z = detail::dispersion_symbols(x, s.c);
            EncodedSymbols e;
            e.total_outcomes = detail::checked_pow(s.c, s.m);
            e.ids.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
              OutcomeId id = 0;
              for (std::size_t k = 0; k < s.m; ++k) id = id * s.c + z[i + k * s.tau];
              e.ids[i] = id;
            }
            return e;
          },
          [&](const CosineSimilarityBinning& s) {
            auto x = detail::checked_series(data);
            const EmbeddingSpec es{s.m, s.tau};
            const std::size_t n = embedded_length(x.size(), es);
            if (n < 2) throw InputTooShort(Axis::OutcomeSpace, embedding_span(es) + 1, x.size());
            EncodedSymbols e;
            e.total_outcomes = s.nbins;
            e.ids.resize(n - 1);
            std::vector<double> a(s.m), b(s.m);
            for (std::size_t i = 0; i + 1 < n; ++i) {
              for (std::size_t k = 0; k < s.m; ++k) {
                a[k] = x[i + k * s.tau];
                b[k] = x[i + 1 + k * s.tau];
              }
              const double cs = detail::cosine_similarity(a, b);
              const auto bin = static_cast<std::size_t>(std::floor((cs + 1.0) / 2.0 * static_cast<double>(s.nbins)));
              e.ids[i] = std::min(bin, s.nbins - 1);
            }
            return e;
          },
          [&](const BubbleSortSwaps& s) {
            auto x = detail::checked_series(data);
            EncodedSymbols e;
            e.total_outcomes = s.m * (s.m - 1) / 2 + 1;
            std::vector<double> buf;
            e.ids.resize(embedded_length(x.size(), EmbeddingSpec{s.m, s.tau}));
            for_each_window(x, EmbeddingSpec{s.m, s.tau}, buf,
                            [&](std::size_t i, std::span<const double> w) { e.ids[i] = detail::inversions(w); });
            return e;
          },
          [&](const PowerSpectrum&) -> EncodedSymbols {
            throw NotCounting(Axis::OutcomeSpace, "PowerSpectrum is not a counting-based outcome space");
          },
          [&](const SpatialOrdinalPatterns& s) {
            const Matrix& a = data.matrix();
            require_finite(a.raw(), Axis::OutcomeSpace);
            const auto p = detail::stencil_placements(s.stencil, a);
            const auto values = detail::gather_stencil(s.stencil, a, p);
            EncodedSymbols e;
            detail::dispatch_length<detail::GatheredOrdinalKernel>(s.stencil.size(), std::span<const double>(values),
                                                                   e.ids);
            e.total_outcomes = factorial(s.stencil.size());
            return e;
          },
          [&](const SpatialDispersion& s) {
            const Matrix& a = data.matrix();
            require_finite(a.raw(), Axis::OutcomeSpace);
            const auto p = detail::stencil_placements(s.stencil, a);
            const auto z = detail::dispersion_symbols(a.raw(), s.c);
            EncodedSymbols e;
            e.total_outcomes = detail::checked_pow(s.c, s.stencil.size());
            e.ids.reserve(p.count());
            for (std::size_t r = p.r0; r < p.r1; ++r)
              for (std::size_t c = p.c0; c < p.c1; ++c) {
                OutcomeId id = 0;
                for (const auto& [dr, dc] : s.stencil) {
                  const auto rr = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(r) + dr);
                  const auto cc = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(c) + dc);
                  id = id * s.c + z[rr * a.cols() + cc];
                }
                e.ids.push_back(id);
              }
            return e;
          },
      },
      o);
}

inline EncodedSymbols spatial_encode(const OutcomeSpace& o, const Matrix& array) {
  if (!is_spatial(o)) throw Incompatible(Axis::OutcomeSpace, "spatial_encode needs a spatial outcome space");
  return encode(o, DataView(array));
}

// ---------------------------------------------------------------------------
// Counting
// ---------------------------------------------------------------------------

// Tally of ids in [0, total): dense table when the space is small relative to
// the data, sort + run-length otherwise. Output is sorted by id.
inline Counts tally(std::span<const OutcomeId> ids, std::optional<std::uint64_t> total) {
  Counts c;
  c.total_outcomes = total;
  std::vector<OutcomeId> out_ids;
  const std::uint64_t dense_limit = std::max<std::uint64_t>(65536, 2 * static_cast<std::uint64_t>(ids.size()));
  if (total && *total <= dense_limit) {
    std::vector<std::uint64_t> table(*total, 0);
    for (auto id : ids) ++table[id];
    for (std::uint64_t k = 0; k < *total; ++k)
      if (table[k]) {
        out_ids.push_back(k);
        c.values.push_back(table[k]);
      }
  } else {
    std::vector<OutcomeId> sorted(ids.begin(), ids.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size();) {
      std::size_t j = i;
      while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
      out_ids.push_back(sorted[i]);
      c.values.push_back(j - i);
      i = j;
    }
  }
  c.outcome_ids = std::move(out_ids);
  return c;
}

// Counts over observed outcomes, sorted by id, with the space cardinality.
inline Counts counts(const OutcomeSpace& o, const DataView& data) {
  validate(o);
  if (!is_counting(o)) throw NotCounting(Axis::OutcomeSpace, "PowerSpectrum is not a counting-based outcome space");
  if (const auto* b = std::get_if<ValueBinning>(&o)) {
    auto binned = detail::value_binning_counts(*b, data);
    if (!binned.counts.outcome_ids) {
      // Too many cells for linear ids: number occupied bins in lexicographic order.
      std::vector<OutcomeId> ids(binned.size());
      for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
      binned.counts.outcome_ids = std::move(ids);
    }
    return std::move(binned.counts);
  }
  const auto e = encode(o, data);
  return tally(e.ids, e.total_outcomes);
}

// Cardinality resolved against the data. nullopt only for binnings whose cell
// count exceeds 64 bits.
inline std::optional<std::uint64_t> total_outcomes(const OutcomeSpace& o, const DataView& data) {
  if (auto t = total_outcomes(o)) return t;
  using detail::Overloaded;
  return std::visit(
      Overloaded{
          [&](const UniqueElements&) -> std::optional<std::uint64_t> {
            return detail::sorted_unique(detail::checked_series(data)).size();
          },
          [&](const ValueBinning& b) -> std::optional<std::uint64_t> {
            StateSpaceSet pts = detail::as_points(data);
            if (pts.empty()) throw InputTooShort(Axis::OutcomeSpace, 1, 0);
            std::vector<std::uint64_t> per_axis;
            for (const auto& a : detail::value_bins(b, pts)) per_axis.push_back(a.count);
            return detail::checked_product(per_axis);
          },
          [&](const PowerSpectrum&) -> std::optional<std::uint64_t> { return data.series().size() / 2 + 1; },
          [&](const auto&) -> std::optional<std::uint64_t> { return std::nullopt; },
      },
      o);
}

// Normalized one-sided spectral power over all floor(N/2)+1 frequency bins.
inline Probabilities spectral_probabilities(std::span<const double> x) {
  require_finite(x, Axis::OutcomeSpace);
  const auto power = power_spectrum(x);
  double total = 0.0;
  for (double v : power) total += v;
  if (!(total > 0.0)) throw EmptyCounts(Axis::OutcomeSpace, "signal has zero spectral power");
  Probabilities p;
  p.values.resize(power.size());
  std::vector<OutcomeId> ids(power.size());
  for (std::size_t k = 0; k < power.size(); ++k) {
    p.values[k] = power[k] / total;
    ids[k] = k;
  }
  p.outcome_ids = std::move(ids);
  return p;
}

// ---------------------------------------------------------------------------
// Decoding
// ---------------------------------------------------------------------------

namespace detail {

inline std::string tuple_label(const std::vector<double>& v, bool integral) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += integral ? std::to_string(static_cast<long long>(v[i])) : fmt_real(v[i]);
  }
  return s + ")";
}

inline std::vector<double> base_c_digits(OutcomeId id, std::size_t c, std::size_t m) {
  std::vector<double> d(m);
  for (std::size_t k = m; k-- > 0;) {
    d[k] = static_cast<double>(id % c + 1);  // symbols are 1..c
    id /= c;
  }
  return d;
}

inline Outcome permutation_outcome(OutcomeId id, std::size_t m) {
  const auto perm = lehmer_decode(id, m);
  std::vector<double> v(perm.begin(), perm.end());
  return Outcome{id, v, tuple_label(v, true)};
}

}  // namespace detail

// Decoded form of a single outcome id.
inline Outcome decode_outcome(const OutcomeSpace& o, OutcomeId id, const DataView& data) {
  using detail::Overloaded;
  return std::visit(
      Overloaded{
          [&](const UniqueElements&) {
            const auto u = detail::sorted_unique(detail::checked_series(data));
            if (id >= u.size()) throw InvalidParameter(Axis::OutcomeSpace, "outcome id out of range");
            return Outcome{id, {u[id]}, detail::fmt_real(u[id])};
          },
          [&](const ValueBinning& b) {
            StateSpaceSet pts = detail::as_points(data);
            const auto axes = detail::value_bins(b, pts);
            std::vector<double> edges(axes.size());
            OutcomeId rest = id;
            for (std::size_t k = axes.size(); k-- > 0;) {
              const auto idx = rest % axes[k].count;
              rest /= axes[k].count;
              edges[k] = axes[k].lo + static_cast<double>(idx) * axes[k].width;
            }
            std::string label;
            for (std::size_t k = 0; k < axes.size(); ++k) {
              if (k) label += " x ";
              const double hi = axes[k].width > 0.0 ? edges[k] + axes[k].width : edges[k];
              label += "[" + detail::fmt_real(edges[k]) + ", " + detail::fmt_real(hi) + ")";
            }
            return Outcome{id, edges, label};
          },
          [&](const OrdinalPatterns& s) { return detail::permutation_outcome(id, s.m); },
          [&](const Dispersion& s) {
            auto v = detail::base_c_digits(id, s.c, s.m);
            return Outcome{id, v, detail::tuple_label(v, true)};
          },
          [&](const CosineSimilarityBinning& s) {
            const double w = 2.0 / static_cast<double>(s.nbins);
            const double lo = -1.0 + static_cast<double>(id) * w;
            return Outcome{id, {lo}, "[" + detail::fmt_real(lo) + ", " + detail::fmt_real(lo + w) + ")"};
          },
          [&](const BubbleSortSwaps&) {
            return Outcome{id, {static_cast<double>(id)}, std::to_string(id)};
          },
          [&](const PowerSpectrum&) {
            const double f = static_cast<double>(id) / static_cast<double>(data.series().size());
            return Outcome{id, {f}, detail::fmt_real(f)};
          },
          [&](const SpatialOrdinalPatterns& s) { return detail::permutation_outcome(id, s.stencil.size()); },
          [&](const SpatialDispersion& s) {
            auto v = detail::base_c_digits(id, s.c, s.stencil.size());
            return Outcome{id, v, detail::tuple_label(v, true)};
          },
      },
      o);
}

// Observed outcomes in id order.
inline std::vector<Outcome> outcomes(const OutcomeSpace& o, const DataView& data) {
  std::vector<Outcome> out;
  if (!is_counting(o)) {
    const auto p = spectral_probabilities(data.series());
    for (std::size_t k = 0; k < p.size(); ++k)
      if (p.values[k] > 0.0) out.push_back(decode_outcome(o, k, data));
    return out;
  }
  const auto c = counts(o, data);
  if (const auto* b = std::get_if<ValueBinning>(&o); b && !c.total_outcomes)
    throw CardinalityOverflow(Axis::OutcomeSpace, "binning too large to decode outcome ids");
  out.reserve(c.size());
  for (auto id : *c.outcome_ids) out.push_back(decode_outcome(o, id, data));
  return out;
}

// Outcomes possible under the space but absent from the data.
inline std::uint64_t missing_outcomes(const OutcomeSpace& o, const DataView& data) {
  validate(o);
  if (std::holds_alternative<UniqueElements>(o) || std::holds_alternative<PowerSpectrum>(o))
    throw UncountableSpace(Axis::OutcomeSpace, describe(o) + " has no a-priori outcome count");
  const auto c = counts(o, data);
  if (!c.total_outcomes) throw CardinalityOverflow(Axis::OutcomeSpace, "outcome space cardinality exceeds 2^63-1");
  return *c.total_outcomes - c.size();
}

}  // namespace cmx
