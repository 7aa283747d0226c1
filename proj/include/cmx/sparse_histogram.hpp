#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "cmx/core.hpp"

namespace cmx {

// Histogram over occupied bins only. Bin coordinates are integer offsets from
// the per-axis data minimum in units of the bin width.
struct BinnedCounts {
  std::size_t dimension = 0;
  std::vector<std::int64_t> bins;  // occupied bins, row-major (size() * dimension)
  Counts counts;                   // aligned with `bins`, lexicographic bin order

  std::size_t size() const noexcept { return counts.values.size(); }
  std::span<const std::int64_t> bin(std::size_t i) const { return {bins.data() + i * dimension, dimension}; }
};

namespace detail {

inline std::uint64_t hash_bin(std::span<const std::int64_t> b) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto v : b) {
    std::uint64_t x = static_cast<std::uint64_t>(v);
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    h = (h ^ x) * 0x100000001b3ULL;
  }
  return h;
}

// Product of per-axis bin counts, nullopt on 64-bit overflow.
inline std::optional<std::uint64_t> checked_product(std::span<const std::uint64_t> factors) {
  std::uint64_t total = 1;
  for (auto f : factors) {
    if (f != 0 && total > std::numeric_limits<std::int64_t>::max() / f) return std::nullopt;
    total *= f;
  }
  return total;
}

}  // namespace detail

// Aggregates precomputed integer bin coordinates (n points x d axes) into
// counts over occupied bins. `per_axis` gives the bin count of each axis.
inline BinnedCounts count_occupied_bins(const std::vector<std::int64_t>& coords, std::size_t n, std::size_t d,
                                        std::span<const std::uint64_t> per_axis) {
  BinnedCounts out;
  out.dimension = d;
  auto key = [&](std::size_t i) { return std::span<const std::int64_t>(coords.data() + i * d, d); };

  // Table keyed by the index of the first point seen in each bin.
  struct Hash {
    const std::vector<std::int64_t>* c;
    std::size_t d;
    std::size_t operator()(std::size_t i) const {
      return detail::hash_bin(std::span<const std::int64_t>(c->data() + i * d, d));
    }
  };
  struct Eq {
    const std::vector<std::int64_t>* c;
    std::size_t d;
    bool operator()(std::size_t a, std::size_t b) const {
      return std::equal(c->begin() + static_cast<std::ptrdiff_t>(a * d),
                        c->begin() + static_cast<std::ptrdiff_t>((a + 1) * d),
                        c->begin() + static_cast<std::ptrdiff_t>(b * d));
    }
  };
  std::unordered_map<std::size_t, std::uint64_t, Hash, Eq> table(n / 4 + 16, Hash{&coords, d}, Eq{&coords, d});
  for (std::size_t i = 0; i < n; ++i) ++table.try_emplace(i, 0).first->second;

  std::vector<std::pair<std::size_t, std::uint64_t>> occupied(table.begin(), table.end());
  std::sort(occupied.begin(), occupied.end(), [&](const auto& a, const auto& b) {
    auto ka = key(a.first);
    auto kb = key(b.first);
    return std::lexicographical_compare(ka.begin(), ka.end(), kb.begin(), kb.end());
  });

  out.bins.reserve(occupied.size() * d);
  out.counts.values.reserve(occupied.size());
  for (const auto& [first, count] : occupied) {
    auto k = key(first);
    out.bins.insert(out.bins.end(), k.begin(), k.end());
    out.counts.values.push_back(count);
  }
  out.counts.total_outcomes = detail::checked_product(per_axis);
  if (out.counts.total_outcomes) {
    // Mixed-radix linear ids, first axis most significant (same order as the bins).
    std::vector<OutcomeId> ids;
    ids.reserve(occupied.size());
    for (std::size_t b = 0; b < out.size(); ++b) {
      OutcomeId id = 0;
      auto k = out.bin(b);
      for (std::size_t a = 0; a < d; ++a) id = id * per_axis[a] + static_cast<OutcomeId>(k[a]);
      ids.push_back(id);
    }
    out.counts.outcome_ids = std::move(ids);
  }
  return out;
}

// Counts points per occupied eps-cube anchored at the per-axis minimum. Memory
// is O(N*D + occupied bins); the full grid is never materialized.
inline BinnedCounts sparse_histogram(const StateSpaceSet& points, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidParameter(Axis::OutcomeSpace, "bin width must be > 0");
  require_finite(points.raw(), Axis::OutcomeSpace);
  const std::size_t n = points.size();
  const std::size_t d = points.dimension();
  if (n == 0) {
    BinnedCounts out;
    out.dimension = d;
    out.counts.total_outcomes = 0;
    return out;
  }

  std::vector<double> lo(d, std::numeric_limits<double>::infinity());
  std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    auto p = points[i];
    for (std::size_t k = 0; k < d; ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  }
  std::vector<std::uint64_t> per_axis(d);
  for (std::size_t k = 0; k < d; ++k) {
    const double bins = std::floor((hi[k] - lo[k]) / eps) + 1.0;
    if (bins >= 9.0e18) throw CardinalityOverflow(Axis::OutcomeSpace, "bin coordinate exceeds 64-bit range");
    per_axis[k] = static_cast<std::uint64_t>(bins);
  }

  std::vector<std::int64_t> coords(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    auto p = points[i];
    for (std::size_t k = 0; k < d; ++k)
      coords[i * d + k] = static_cast<std::int64_t>(std::floor((p[k] - lo[k]) / eps));
  }
  return count_occupied_bins(coords, n, d, per_axis);
}

}  // namespace cmx
