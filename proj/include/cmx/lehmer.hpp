#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cmx/core.hpp"

namespace cmx {

inline constexpr std::size_t kMaxPermutationLength = 12;

constexpr std::uint64_t factorial(std::size_t n) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return f;
}

inline void require_permutation(std::span<const std::size_t> perm) {
  const std::size_t m = perm.size();
  if (m == 0 || m > kMaxPermutationLength)
    throw InvalidParameter(Axis::OutcomeSpace, "permutation length must be in 1..12");
  std::array<bool, kMaxPermutationLength> seen{};
  for (auto v : perm) {
    if (v >= m || seen[v]) throw InvalidParameter(Axis::OutcomeSpace, "not a permutation of 0..m-1");
    seen[v] = true;
  }
}

namespace detail {

// Rank without validation. d_i = #{j > i : perm[j] < perm[i]}, weighted by (m-1-i)!.
template <class Seq>
constexpr std::uint64_t lehmer_rank(const Seq& perm, std::size_t m) {
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < m; ++i) {
    std::uint64_t smaller = 0;
    for (std::size_t j = i + 1; j < m; ++j) smaller += perm[j] < perm[i];
    code = code * (m - i) + smaller;
  }
  return code;
}

}  // namespace detail

// Bijection from permutations of 0..m-1 onto [0, m!-1]; identity maps to 0.
inline std::uint64_t lehmer_encode(std::span<const std::size_t> perm) {
  require_permutation(perm);
  return detail::lehmer_rank(perm, perm.size());
}

inline std::vector<std::size_t> lehmer_decode(std::uint64_t code, std::size_t m) {
  if (m == 0 || m > kMaxPermutationLength)
    throw InvalidParameter(Axis::OutcomeSpace, "permutation length must be in 1..12");
  if (code >= factorial(m)) throw InvalidParameter(Axis::OutcomeSpace, "Lehmer code out of range");
  std::array<std::size_t, kMaxPermutationLength> digits{};
  for (std::size_t i = m; i-- > 0;) {
    const std::size_t radix = m - i;
    digits[i] = code % radix;
    code /= radix;
  }
  std::vector<std::size_t> pool(m);
  for (std::size_t i = 0; i < m; ++i) pool[i] = i;
  std::vector<std::size_t> perm(m);
  for (std::size_t i = 0; i < m; ++i) {
    perm[i] = pool[digits[i]];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digits[i]));
  }
  return perm;
}

}  // namespace cmx
