#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "cmx/cli/config.hpp"
#include "cmx/cli/ingest.hpp"
#include "cmx/multiscale.hpp"
#include "cmx/recipe.hpp"

namespace cmx::cli {

inline constexpr const char* kThreadsEnv = "CMX_THREADS";

struct ResultRow {
  std::size_t index = 0;  // 1-based position in the config
  std::string name;
  std::optional<std::size_t> scale;
  std::string recipe;
  std::optional<double> value;
  std::size_t n_samples = 0;
  bool normalized = false;
  std::size_t clamped = 0;
  std::string status = "ok";
  std::string error;
};

inline bool all_ok(const std::vector<ResultRow>& rows) {
  for (const auto& r : rows)
    if (r.status != "ok") return false;
  return true;
}

// Thread count from CMX_THREADS, else 1.
inline std::size_t default_threads() {
  if (const char* s = std::getenv(kThreadsEnv)) {
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    if (end != s && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
  }
  return 1;
}

// Runs job(i) for i in [0, n) on up to `threads` workers. Each job writes
// only its own slot, so results are in index order regardless of scheduling.
inline void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& job) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) job(i);
    });
  for (auto& th : pool) th.join();
}

namespace detail {

inline ResultRow base_row(const RecipeEntry& e, std::size_t index) {
  ResultRow r;
  r.index = index + 1;
  r.name = e.name;
  r.recipe = e.recipe ? describe(*e.recipe) : e.spec;
  return r;
}

// Row for an entry whose recipe was rejected when the config was read.
inline ResultRow error_row(const RecipeEntry& e, std::size_t index) {
  ResultRow r = base_row(e, index);
  r.status = "error";
  r.error = e.error;
  return r;
}

inline void fill(ResultRow& row, const MeasureResult& m) {
  row.recipe = m.recipe;
  row.value = m.value;
  row.n_samples = m.n_samples;
  row.normalized = m.normalized;
  row.clamped = m.clamped;
}

}  // namespace detail

inline std::vector<ResultRow> run_batch(const RecipeConfig& cfg, const DataView& data,
                                        std::size_t threads = default_threads()) {
  std::vector<ResultRow> rows(cfg.recipes.size());
  parallel_for(cfg.recipes.size(), threads, [&](std::size_t i) {
    const auto& e = cfg.recipes[i];
    ResultRow row = detail::base_row(e, i);
    try {
      if (e.recipe) detail::fill(row, evaluate(*e.recipe, data));
      else row = detail::error_row(e, i);
    } catch (const std::exception& err) {
      row.status = "error";
      row.error = err.what();
    }
    rows[i] = std::move(row);
  });
  return rows;
}

// One row per (recipe, scale), grouped by recipe in config order.
inline std::vector<ResultRow> run_multiscale(const RecipeConfig& cfg, const MultiscaleSpec& spec,
                                             std::span<const double> x, std::size_t threads = default_threads()) {
  std::vector<std::vector<ResultRow>> per(cfg.recipes.size());
  parallel_for(cfg.recipes.size(), threads, [&](std::size_t i) {
    const auto& e = cfg.recipes[i];
    if (!e.recipe) {
      per[i].push_back(detail::error_row(e, i));
      return;
    }
    try {
      for (const auto& s : multiscale(spec, *e.recipe, x)) {
        ResultRow row = detail::base_row(e, i);
        row.scale = s.scale;
        row.n_samples = s.length;
        if (s.result) detail::fill(row, *s.result);
        row.status = to_string(s.status);
        row.error = s.error;
        per[i].push_back(std::move(row));
      }
    } catch (const std::exception& err) {
      ResultRow row = detail::base_row(e, i);
      row.status = "error";
      row.error = err.what();
      per[i].push_back(std::move(row));
    }
  });
  std::vector<ResultRow> rows;
  for (auto& v : per)
    for (auto& r : v) rows.push_back(std::move(r));
  return rows;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace detail

// Values use %.17g so they round-trip exactly. Multiscale output carries a
// scale column, empty on rows that failed before any scale ran.
inline void write_rows(std::ostream& os, const std::vector<ResultRow>& rows, OutputFormat format,
                       bool with_scale = false) {
  if (format == OutputFormat::Csv) {
    os << "index,name," << (with_scale ? "scale," : "") << "recipe,value,n_samples,normalized,clamped,status,error\n";
    for (const auto& r : rows) {
      os << r.index << ',' << detail::csv_field(r.name) << ',';
      if (with_scale) os << (r.scale ? std::to_string(*r.scale) : std::string()) << ',';
      os << detail::csv_field(r.recipe) << ',' << (r.value ? cmx::detail::fmt_real(*r.value) : std::string()) << ','
         << r.n_samples << ',' << (r.normalized ? "true" : "false") << ',' << r.clamped << ',' << r.status << ','
         << detail::csv_field(r.error) << '\n';
    }
    return;
  }
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["index"] = r.index;
    j["name"] = r.name;
    if (with_scale) j["scale"] = r.scale ? nlohmann::ordered_json(*r.scale) : nlohmann::ordered_json(nullptr);
    j["recipe"] = r.recipe;
    // Non-finite values have no JSON spelling; they are emitted as null.
    if (r.value && std::isfinite(*r.value)) j["value"] = *r.value;
    else j["value"] = nullptr;
    j["n_samples"] = r.n_samples;
    j["normalized"] = r.normalized;
    j["clamped"] = r.clamped;
    j["status"] = r.status;
    if (!r.error.empty()) j["error"] = r.error;
    os << j.dump() << '\n';
  }
}

// Process exit status: 0 all rows ok, 2 some rows failed.
inline int batch_exit_code(const std::vector<ResultRow>& rows) { return all_ok(rows) ? 0 : 2; }

}  // namespace cmx::cli
