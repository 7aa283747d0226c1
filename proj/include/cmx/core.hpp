#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cmx {

using OutcomeId = std::uint64_t;
using TimeSeries = std::vector<double>;

// Unit-sum tolerance shared by every PMF check.
inline constexpr double kPmfTolerance = 1e-12;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

// Pipeline stage that produced an error.
enum class Axis { Core, Embedding, OutcomeSpace, Probabilities, Measure, Estimator, Complexity, Multiscale, Io, Config };

inline const char* to_string(Axis a) {
  switch (a) {
    case Axis::Core: return "core";
    case Axis::Embedding: return "embedding";
    case Axis::OutcomeSpace: return "outcome_space";
    case Axis::Probabilities: return "probabilities";
    case Axis::Measure: return "measure";
    case Axis::Estimator: return "estimator";
    case Axis::Complexity: return "complexity";
    case Axis::Multiscale: return "multiscale";
    case Axis::Io: return "io";
    case Axis::Config: return "config";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Axis axis, const std::string& what)
      : std::runtime_error(std::string(to_string(axis)) + ": " + what), axis_(axis) {}
  Axis axis() const noexcept { return axis_; }

 private:
  Axis axis_;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class InputTooShort : public Error {
 public:
  InputTooShort(Axis axis, std::size_t required, std::size_t got)
      : Error(axis, "input too short: need at least " + std::to_string(required) + " samples, got " +
                        std::to_string(got)),
        required_(required) {}
  std::size_t required() const noexcept { return required_; }

 private:
  std::size_t required_;
};

class NonFiniteInput : public Error {
 public:
  NonFiniteInput(Axis axis, std::size_t index)
      : Error(axis, "non-finite value at index " + std::to_string(index)), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class CardinalityOverflow : public Error {
 public:
  using Error::Error;
};

// Operation needs a finite, a-priori outcome count the space cannot provide.
class UncountableSpace : public Error {
 public:
  using Error::Error;
};

// Counting-only operation requested on a non-counting outcome space.
class NotCounting : public Error {
 public:
  using Error::Error;
};

class Incompatible : public Error {
 public:
  using Error::Error;
};

class EmptyCounts : public Error {
 public:
  using Error::Error;
};

class DegenerateSpace : public Error {
 public:
  using Error::Error;
};

class Undefined : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Data containers
// ---------------------------------------------------------------------------

// N points of fixed dimension D, stored row-major.
class StateSpaceSet {
 public:
  StateSpaceSet() = default;
  StateSpaceSet(std::size_t dim, std::vector<double> data) : dim_(dim), data_(std::move(data)) {
    if (dim_ == 0) throw InvalidParameter(Axis::Core, "StateSpaceSet dimension must be >= 1");
    if (data_.size() % dim_ != 0)
      throw InvalidParameter(Axis::Core, "StateSpaceSet storage is not a multiple of the dimension");
  }
  static StateSpaceSet from_series(std::span<const double> x) {
    return StateSpaceSet(1, std::vector<double>(x.begin(), x.end()));
  }

  std::size_t size() const noexcept { return dim_ == 0 ? 0 : data_.size() / dim_; }
  std::size_t dimension() const noexcept { return dim_; }
  bool empty() const noexcept { return size() == 0; }

  std::span<const double> operator[](std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  std::span<double> operator[](std::size_t i) { return {data_.data() + i * dim_, dim_}; }
  const std::vector<double>& raw() const noexcept { return data_; }

  friend bool operator==(const StateSpaceSet&, const StateSpaceSet&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

// Dense 2-D real array, row-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) throw InvalidParameter(Axis::Core, "matrix storage does not match shape");
  }
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const std::vector<double>& raw() const noexcept { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// ---------------------------------------------------------------------------
// Counts and probabilities
// ---------------------------------------------------------------------------

// Occurrence counts. Sparse storage is allowed: only observed outcomes need to
// appear, with the size of the full outcome space carried in total_outcomes
// (nullopt when the space is too large to enumerate).
struct Counts {
  std::vector<std::uint64_t> values;
  std::optional<std::uint64_t> total_outcomes;
  std::optional<std::vector<OutcomeId>> outcome_ids;

  std::uint64_t sum() const { return std::accumulate(values.begin(), values.end(), std::uint64_t{0}); }
  std::size_t size() const noexcept { return values.size(); }
};

// An element of an outcome space: integer id plus its decoded form
// (permutation tuple, symbol word, bin lower edges, raw value, ...).
struct Outcome {
  OutcomeId id = 0;
  std::vector<double> value;
  std::string label;

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct Probabilities {
  std::vector<double> values;
  std::optional<std::vector<OutcomeId>> outcome_ids;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

inline bool validate_pmf(std::span<const double> p) {
  if (p.empty()) return false;
  double s = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) return false;
    s += v;
  }
  return std::abs(s - 1.0) <= kPmfTolerance;
}

inline bool validate_pmf(const Probabilities& p) {
  if (p.outcome_ids && p.outcome_ids->size() != p.values.size()) return false;
  return validate_pmf(std::span<const double>(p.values));
}

inline void require_pmf(const Probabilities& p) {
  if (!validate_pmf(p)) throw InvalidParameter(Axis::Measure, "input is not a valid probability vector");
}

// Relative frequencies; keeps the outcome alignment of the counts.
inline Probabilities to_probabilities(const Counts& c) {
  const std::uint64_t n = c.sum();
  if (n == 0) throw EmptyCounts(Axis::Probabilities, "counts sum to zero");
  Probabilities p;
  p.values.reserve(c.values.size());
  const double dn = static_cast<double>(n);
  for (auto v : c.values) p.values.push_back(static_cast<double>(v) / dn);
  p.outcome_ids = c.outcome_ids;
  return p;
}

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

struct MeasureResult {
  double value = 0.0;
  std::string recipe;
  std::size_t n_samples = 0;
  bool normalized = false;
  // Diagnostics: points whose log argument was clamped (differential), or 1
  // when a normalized estimate was clamped into [0, 1].
  std::size_t clamped = 0;
};

inline void require_finite(std::span<const double> x, Axis axis) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i])) throw NonFiniteInput(axis, i);
}

inline double mean(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

// Sample standard deviation (n - 1 denominator); 0 for fewer than two samples.
inline double sample_std(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double mu = mean(x);
  double acc = 0.0;
  for (double v : x) acc += (v - mu) * (v - mu);
  return std::sqrt(acc / static_cast<double>(x.size() - 1));
}

}  // namespace cmx
