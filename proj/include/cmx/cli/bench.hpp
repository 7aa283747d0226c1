#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <sys/utsname.h>

#include <json.hpp>

#include "cmx/cli/batch.hpp"
#include "cmx/cli/config.hpp"
#include "cmx/recipe.hpp"

namespace cmx::cli {

// Hooks into a process-wide allocation counter. Absent hooks mean allocation
// figures are reported as unavailable.
struct AllocProbe {
  void (*reset_peak)() = nullptr;               // peak := current live bytes
  std::size_t (*live_bytes)() = nullptr;
  std::size_t (*peak_bytes)() = nullptr;
  std::uint64_t (*allocation_count)() = nullptr;

  bool available() const { return reset_peak && live_bytes && peak_bytes && allocation_count; }
};

struct BenchRow {
  std::size_t n = 0;
  std::size_t runs = 0;
  std::uint64_t median_ns = 0;
  std::optional<std::size_t> peak_bytes;       // above the live heap at call start
  std::optional<std::uint64_t> allocations;    // per call
  double value = 0.0;
};

struct BenchmarkReport {
  std::string recipe;
  std::string machine;
  std::uint64_t seed = 0;
  std::vector<BenchRow> rows;
  std::optional<double> scaling_exponent;  // least-squares slope of log t against log N
};

inline std::string machine_descriptor() {
  std::string s;
  utsname u{};
  if (uname(&u) == 0) s = std::string(u.sysname) + " " + u.release + " " + u.machine;
  s += ", " + std::to_string(std::thread::hardware_concurrency()) + " hw threads";
#if defined(__clang__)
  s += ", clang " __clang_version__;
#elif defined(__GNUC__)
  s += ", gcc " __VERSION__;
#endif
  return s;
}

inline TimeSeries white_noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  TimeSeries x(n);
  for (auto& v : x) v = d(rng);
  return x;
}

inline std::optional<double> loglog_slope(const std::vector<BenchRow>& rows) {
  if (rows.size() < 2) return std::nullopt;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(rows.size());
  for (const auto& r : rows) {
    const double x = std::log(static_cast<double>(r.n));
    const double y = std::log(std::max<double>(1.0, static_cast<double>(r.median_ns)));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = k * sxx - sx * sx;
  if (den == 0.0) return std::nullopt;
  return (k * sxy - sx * sy) / den;
}

// Median wall time of `runs` calls after one discarded warm-up call, on
// seeded white noise of each size.
inline BenchmarkReport bench(const Recipe& recipe, const std::vector<std::size_t>& sizes, std::uint64_t seed,
                             std::size_t runs = 10, const AllocProbe& probe = {}) {
  if (runs < 10) throw InvalidParameter(Axis::Config, "bench needs at least 10 runs");
  if (sizes.empty()) throw InvalidParameter(Axis::Config, "bench needs at least one size");
  BenchmarkReport rep;
  rep.recipe = describe(recipe);
  rep.machine = machine_descriptor();
  rep.seed = seed;
  std::vector<std::size_t> sorted = sizes;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t n : sorted) {
    const TimeSeries x = white_noise(n, seed);
    BenchRow row;
    row.n = n;
    row.runs = runs;
    row.value = evaluate(recipe, x).value;  // warm-up
    if (probe.available()) {
      probe.reset_peak();
      const std::size_t live = probe.live_bytes();
      const std::uint64_t count = probe.allocation_count();
      (void)evaluate(recipe, x);
      row.peak_bytes = probe.peak_bytes() - live;
      row.allocations = probe.allocation_count() - count;
    }
    std::vector<std::uint64_t> times(runs);
    for (auto& t : times) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto r = evaluate(recipe, x);
      const auto t1 = std::chrono::steady_clock::now();
      if (r.value != row.value) throw Error(Axis::Config, "non-deterministic result during bench");
      t = static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
    }
    std::nth_element(times.begin(), times.begin() + runs / 2, times.end());
    std::uint64_t median = times[runs / 2];
    if (runs % 2 == 0) {
      const auto lower = *std::max_element(times.begin(), times.begin() + runs / 2);
      median = (median + lower) / 2;
    }
    row.median_ns = median;
    rep.rows.push_back(row);
  }
  rep.scaling_exponent = loglog_slope(rep.rows);
  return rep;
}

inline void write_report(std::ostream& os, const BenchmarkReport& rep, OutputFormat format) {
  if (format == OutputFormat::Jsonl) {
    for (const auto& r : rep.rows) {
      nlohmann::ordered_json j;
      j["recipe"] = rep.recipe;
      j["n"] = r.n;
      j["runs"] = r.runs;
      j["median_ns"] = r.median_ns;
      j["peak_bytes"] = r.peak_bytes ? nlohmann::ordered_json(*r.peak_bytes) : nlohmann::ordered_json("unavailable");
      j["allocations"] = r.allocations ? nlohmann::ordered_json(*r.allocations) : nlohmann::ordered_json("unavailable");
      j["value"] = r.value;
      j["seed"] = rep.seed;
      j["machine"] = rep.machine;
      os << j.dump() << '\n';
    }
    nlohmann::ordered_json fit;
    fit["recipe"] = rep.recipe;
    fit["scaling_exponent"] =
        rep.scaling_exponent ? nlohmann::ordered_json(*rep.scaling_exponent) : nlohmann::ordered_json(nullptr);
    os << fit.dump() << '\n';
    return;
  }
  os << "recipe,n,runs,median_ns,peak_bytes,allocations,value,seed,machine\n";
  for (const auto& r : rep.rows) {
    os << detail::csv_field(rep.recipe) << ',' << r.n << ',' << r.runs << ',' << r.median_ns << ','
       << (r.peak_bytes ? std::to_string(*r.peak_bytes) : "unavailable") << ','
       << (r.allocations ? std::to_string(*r.allocations) : "unavailable") << ',' << cmx::detail::fmt_real(r.value)
       << ',' << rep.seed << ',' << detail::csv_field(rep.machine) << '\n';
  }
  os << "# scaling_exponent "
     << (rep.scaling_exponent ? cmx::detail::fmt_real(*rep.scaling_exponent) : std::string("unavailable")) << '\n';
}

}  // namespace cmx::cli
