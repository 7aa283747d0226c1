#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "cmx/core.hpp"

namespace cmx {

struct EmbeddingSpec {
  std::size_t m = 2;
  std::size_t tau = 1;
};

inline void validate(const EmbeddingSpec& s) {
  if (s.m < 1) throw InvalidParameter(Axis::Embedding, "embedding dimension m must be >= 1");
  if (s.tau < 1) throw InvalidParameter(Axis::Embedding, "delay tau must be >= 1");
}

inline std::size_t embedding_span(const EmbeddingSpec& s) { return (s.m - 1) * s.tau + 1; }

// Number of delay vectors; throws InputTooShort when none fit.
inline std::size_t embedded_length(std::size_t n, const EmbeddingSpec& s) {
  validate(s);
  const std::size_t need = embedding_span(s);
  if (n < need) throw InputTooShort(Axis::Embedding, need, n);
  return n - (s.m - 1) * s.tau;
}

// Point i is (x[i], x[i+tau], ..., x[i+(m-1)tau]).
inline StateSpaceSet delay_embed(std::span<const double> x, const EmbeddingSpec& s) {
  const std::size_t n = embedded_length(x.size(), s);
  std::vector<double> out(n * s.m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < s.m; ++k) out[i * s.m + k] = x[i + k * s.tau];
  return StateSpaceSet(s.m, std::move(out));
}

// Fixed-dimension variant: points are std::array<double, M>, so loops over a
// point unroll and no per-point allocation happens.
template <std::size_t M>
std::vector<std::array<double, M>> delay_embed(std::span<const double> x, std::size_t tau) {
  static_assert(M >= 1);
  const std::size_t n = embedded_length(x.size(), EmbeddingSpec{M, tau});
  std::vector<std::array<double, M>> out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < M; ++k) out[i][k] = x[i + k * tau];
  return out;
}

// Calls f(i, window) for every delay vector without materializing the set.
// The window is a reusable buffer of size m.
template <class F>
void for_each_window(std::span<const double> x, const EmbeddingSpec& s, std::vector<double>& buf, F&& f) {
  const std::size_t n = embedded_length(x.size(), s);
  buf.resize(s.m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < s.m; ++k) buf[k] = x[i + k * s.tau];
    f(i, std::span<const double>(buf));
  }
}

}  // namespace cmx
