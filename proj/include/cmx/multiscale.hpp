#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cmx/core.hpp"
#include "cmx/recipe.hpp"

namespace cmx {

struct MultiscaleSpec {
  std::size_t max_scale = 1;
};

// Means of non-overlapping blocks of length s; the remainder is dropped.
inline TimeSeries coarse_grain(std::span<const double> x, std::size_t s) {
  if (s < 1) throw InvalidParameter(Axis::Multiscale, "scale must be >= 1");
  if (s > x.size()) throw InputTooShort(Axis::Multiscale, s, x.size());
  if (s == 1) return TimeSeries(x.begin(), x.end());
  const std::size_t n = x.size() / s;
  TimeSeries y(n);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < s; ++i) acc += x[j * s + i];
    y[j] = acc / static_cast<double>(s);
  }
  return y;
}

enum class ScaleStatus { Ok, TooShort, Failed };

inline const char* to_string(ScaleStatus s) {
  switch (s) {
    case ScaleStatus::Ok: return "ok";
    case ScaleStatus::TooShort: return "too_short";
    case ScaleStatus::Failed: return "failed";
  }
  return "?";
}

struct ScaleResult {
  std::size_t scale = 0;
  std::size_t length = 0;  // length of the coarse-grained series
  ScaleStatus status = ScaleStatus::Ok;
  std::optional<MeasureResult> result;
  std::string error;
};

// One entry per scale 1..max_scale, stopping after the first scale whose
// coarse series is too short for the measure. Data-dependent defaults are
// fixed on the original series, so every scale shares one tolerance.
inline std::vector<ScaleResult> multiscale(const MultiscaleSpec& spec, const Recipe& recipe, std::span<const double> x) {
  if (spec.max_scale < 1) throw InvalidParameter(Axis::Multiscale, "max_scale must be >= 1");
  require_finite(x, Axis::Multiscale);
  if (std::holds_alternative<DifferentialRecipe>(recipe))
    throw Incompatible(Axis::Multiscale, "multiscale applies to information and complexity recipes");
  const Recipe fixed = resolve_defaults(recipe, DataView(x));
  std::vector<ScaleResult> out;
  for (std::size_t s = 1; s <= spec.max_scale; ++s) {
    ScaleResult r;
    r.scale = s;
    r.length = x.size() / s;
    if (s > x.size()) {
      r.status = ScaleStatus::TooShort;
      r.error = "scale exceeds series length";
      out.push_back(std::move(r));
      break;
    }
    try {
      const TimeSeries y = coarse_grain(x, s);
      r.result = evaluate(fixed, DataView(y));
    } catch (const InputTooShort& e) {
      r.status = ScaleStatus::TooShort;
      r.error = e.what();
      out.push_back(std::move(r));
      break;
    } catch (const Error& e) {
      r.status = ScaleStatus::Failed;
      r.error = e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace cmx
