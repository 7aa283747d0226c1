#pragma once

// Data generators and brute-force reference implementations. The references
// deliberately avoid the library's own helpers so that agreement is evidence.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace cmx::test {

inline std::vector<double> normal_series(std::size_t n, std::uint64_t seed, double sd = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, sd);
  std::vector<double> x(n);
  for (auto& v : x) v = d(rng);
  return x;
}

inline std::vector<double> uniform_series(std::size_t n, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> x(n);
  for (auto& v : x) v = d(rng);
  return x;
}

// x -> 4x(1-x) from x0, after discarding `transient` iterates.
inline std::vector<double> logistic_orbit(std::size_t n, double x0, std::size_t transient = 1000) {
  double x = x0;
  for (std::size_t i = 0; i < transient; ++i) x = 4.0 * x * (1.0 - x);
  std::vector<double> out(n);
  for (auto& v : out) {
    x = 4.0 * x * (1.0 - x);
    v = x;
  }
  return out;
}

inline std::vector<double> sine(std::size_t n, double period) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::sin(2.0 * M_PI * static_cast<double>(i) / period);
  return x;
}

inline std::vector<double> ramp(std::size_t n) {
  std::vector<double> x(n);
  std::iota(x.begin(), x.end(), 1.0);
  return x;
}

// Lexicographic rank among all permutations of 0..m-1, by enumeration.
inline std::uint64_t enumerated_rank(const std::vector<std::size_t>& perm) {
  std::vector<std::size_t> p(perm.size());
  std::iota(p.begin(), p.end(), 0);
  std::uint64_t r = 0;
  do {
    if (p == perm) return r;
    ++r;
  } while (std::next_permutation(p.begin(), p.end()));
  return ~std::uint64_t{0};
}

// Indices of the window sorted ascending; equal values keep index order.
inline std::vector<std::size_t> stable_order(const std::vector<double>& w) {
  std::vector<std::size_t> idx(w.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return w[a] < w[b]; });
  return idx;
}

// Dense-grid histogram: every bin of the bounding grid is allocated, then the
// occupied ones are listed in lexicographic bin order.
inline std::vector<std::uint64_t> dense_histogram(const std::vector<std::vector<double>>& pts, double eps) {
  const std::size_t d = pts.front().size();
  std::vector<double> lo(d, INFINITY), hi(d, -INFINITY);
  for (const auto& p : pts)
    for (std::size_t k = 0; k < d; ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  std::vector<std::size_t> extent(d);
  std::size_t cells = 1;
  for (std::size_t k = 0; k < d; ++k) {
    extent[k] = static_cast<std::size_t>(std::floor((hi[k] - lo[k]) / eps)) + 1;
    cells *= extent[k];
  }
  std::vector<std::uint64_t> grid(cells, 0);
  for (const auto& p : pts) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < d; ++k) idx = idx * extent[k] + static_cast<std::size_t>(std::floor((p[k] - lo[k]) / eps));
    ++grid[idx];
  }
  std::vector<std::uint64_t> occupied;
  for (auto c : grid)
    if (c) occupied.push_back(c);
  return occupied;
}

struct Matches {
  std::uint64_t a = 0, b = 0;
};

// O(N^2) template matching over the first N - m*tau templates, i < j.
inline Matches brute_sample_entropy(const std::vector<double>& x, std::size_t m, double r, std::size_t tau) {
  const std::size_t n = x.size() - m * tau;
  Matches out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double dm = 0.0;
      for (std::size_t k = 0; k < m; ++k) dm = std::max(dm, std::abs(x[i + k * tau] - x[j + k * tau]));
      if (dm <= r) {
        ++out.b;
        if (std::max(dm, std::abs(x[i + m * tau] - x[j + m * tau])) <= r) ++out.a;
      }
    }
  return out;
}

// Phi_m: mean over templates of log(fraction of templates within r), self included.
inline double brute_phi(const std::vector<double>& x, std::size_t m, double r, std::size_t tau) {
  const std::size_t n = x.size() - (m - 1) * tau;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t c = 0;
    for (std::size_t j = 0; j < n; ++j) {
      double dm = 0.0;
      for (std::size_t k = 0; k < m; ++k) dm = std::max(dm, std::abs(x[i + k * tau] - x[j + k * tau]));
      c += dm <= r;
    }
    acc += std::log(static_cast<double>(c) / static_cast<double>(n));
  }
  return acc / static_cast<double>(n);
}

// LZ76 by its definition: each new phrase is the shortest block starting at
// i that does not occur starting anywhere earlier (overlap allowed).
inline std::uint64_t lz76_by_definition(const std::string& s) {
  std::uint64_t phrases = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t len = 1;
    while (i + len <= s.size()) {
      const std::string block = s.substr(i, len);
      const std::string history = s.substr(0, i + len - 1);
      if (history.find(block) == std::string::npos) break;
      ++len;
    }
    ++phrases;
    i += len;
  }
  return phrases;
}

inline double shannon_bits(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0) h -= v * std::log2(v);
  return h;
}

inline std::vector<double> random_pmf(std::size_t n, std::mt19937_64& rng, double zero_fraction = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(n);
  double s = 0.0;
  for (auto& v : p) {
    v = u(rng) < zero_fraction ? 0.0 : -std::log(u(rng) + 1e-300);
    s += v;
  }
  if (s == 0.0) {
    p[0] = 1.0;
    return p;
  }
  for (auto& v : p) v /= s;
  return p;
}

}  // namespace cmx::test
