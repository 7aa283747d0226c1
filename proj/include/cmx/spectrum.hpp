#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "cmx/core.hpp"

namespace cmx {

namespace detail {

// FFTW's planner is not re-entrant; execution of distinct plans is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace detail

// One-sided periodogram |X_k|^2 for k = 0 .. floor(N/2).
inline std::vector<double> power_spectrum(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0) throw InputTooShort(Axis::OutcomeSpace, 1, 0);
  const std::size_t nf = n / 2 + 1;

  struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
  };
  std::unique_ptr<double, FftwFree> in(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
  std::unique_ptr<fftw_complex, FftwFree> out(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * nf)));
  if (!in || !out) throw std::bad_alloc();

  fftw_plan plan;
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE);
  }
  std::copy(x.begin(), x.end(), in.get());
  fftw_execute(plan);
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }

  std::vector<double> power(nf);
  for (std::size_t k = 0; k < nf; ++k) power[k] = out.get()[k][0] * out.get()[k][0] + out.get()[k][1] * out.get()[k][1];
  return power;
}

}  // namespace cmx
