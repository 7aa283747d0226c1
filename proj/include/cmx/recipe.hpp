#pragma once

#include <cctype>
#include <cstdlib>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "cmx/complexity.hpp"
#include "cmx/core.hpp"
#include "cmx/differential.hpp"
#include "cmx/discrete_estimators.hpp"
#include "cmx/outcome_spaces.hpp"
#include "cmx/prob_estimators.hpp"

namespace cmx {

// A complete measure: one of the three families.
struct InformationRecipe {
  InfoEstimator estimator;
  ProbEstimator probabilities = RelativeAmount{};
  OutcomeSpace space = OrdinalPatterns{};
  bool normalized = false;
};

struct ComplexityRecipe {
  ComplexityEstimator estimator;
};

struct DifferentialRecipe {
  DifferentialEstimator estimator;
  double base = std::numbers::e;
};

using Recipe = std::variant<InformationRecipe, ComplexityRecipe, DifferentialRecipe>;

inline std::string describe(const Recipe& r) {
  using detail::Overloaded;
  return std::visit(Overloaded{
                        [](const InformationRecipe& i) {
                          return describe_information(i.estimator, i.probabilities, i.space, i.normalized);
                        },
                        [](const ComplexityRecipe& c) { return "complexity(" + describe(c.estimator) + ")"; },
                        [](const DifferentialRecipe& d) {
                          return "differential(" + describe(d.estimator) + ", base=" + detail::fmt_real(d.base) + ")";
                        },
                    },
                    r);
}

// Fixes data-dependent defaults against `data` (used to pin tolerances to the
// original series before coarse-graining).
inline Recipe resolve_defaults(Recipe r, const DataView& data) {
  if (auto* c = std::get_if<ComplexityRecipe>(&r)) c->estimator = resolve_defaults(c->estimator, data);
  return r;
}

inline MeasureResult evaluate(const Recipe& r, const DataView& data) {
  using detail::Overloaded;
  return std::visit(Overloaded{
                        [&](const InformationRecipe& i) {
                          return i.normalized ? information_normalized(i.estimator, i.probabilities, i.space, data)
                                              : information(i.estimator, i.probabilities, i.space, data);
                        },
                        [&](const ComplexityRecipe& c) { return complexity(c.estimator, data); },
                        [&](const DifferentialRecipe& d) {
                          if (!(d.base > 1.0)) throw InvalidParameter(Axis::Estimator, "logarithm base must be > 1");
                          const auto diag = entropy_differential_diag(d.estimator, data);
                          MeasureResult res;
                          res.value = diag.value / std::log(d.base);
                          res.clamped = diag.clamped;
                          res.n_samples = data.length();
                          res.recipe = describe(Recipe(d));
                          return res;
                        },
                    },
                    r);
}

// ---------------------------------------------------------------------------
// Parsing of recipe strings, e.g.
//   information(PlugIn(Shannon(base=2)), RelativeAmount(), OrdinalPatterns(m=3, tau=1))
//   complexity(SampleEntropy(m=2, r=auto, tau=1))
//   SpatialOrdinalPatterns(stencil=[(0, 0), (0, 1), (1, 0), (1, 1)])
// The grammar is the one `describe` emits.
// ---------------------------------------------------------------------------

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(Axis::Config, what) {}
};

namespace recipe_syntax {

struct Node {
  enum class Kind { Call, Number, Ident, List, Tuple } kind = Kind::Ident;
  std::string name;  // Call / Ident
  double number = 0.0;
  std::string text;                                  // literal spelling of numbers
  std::vector<Node> items;                           // positional args, list or tuple items
  std::vector<std::pair<std::string, Node>> kwargs;  // Call only
};

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Node parse_all() {
    Node n = value();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  std::string ident() {
    skip();
    const std::size_t b = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (b == pos_) fail("expected identifier");
    return std::string(s_.substr(b, pos_ - b));
  }

  Node value() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '[' || c == '(') {
      const char close = c == '[' ? ']' : ')';
      ++pos_;
      Node n;
      n.kind = c == '[' ? Node::Kind::List : Node::Kind::Tuple;
      if (!eat(close)) {
        do n.items.push_back(value());
        while (eat(','));
        expect(close);
      }
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
      const char* begin = s_.data() + pos_;
      char* end = nullptr;
      const std::string tmp(s_.substr(pos_));
      const double v = std::strtod(tmp.c_str(), &end);
      const std::size_t used = static_cast<std::size_t>(end - tmp.c_str());
      if (used == 0) fail("malformed number");
      Node n;
      n.kind = Node::Kind::Number;
      n.number = v;
      n.text.assign(begin, used);
      pos_ += used;
      return n;
    }
    Node n;
    n.name = ident();
    if (!eat('(')) {
      n.kind = Node::Kind::Ident;
      return n;
    }
    n.kind = Node::Kind::Call;
    if (eat(')')) return n;
    do {
      skip();
      // Lookahead for `name =`.
      const std::size_t save = pos_;
      if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        std::string key = ident();
        if (eat('=')) {
          n.kwargs.emplace_back(std::move(key), value());
          continue;
        }
        pos_ = save;
      }
      if (!n.kwargs.empty()) fail("positional argument after keyword argument");
      n.items.push_back(value());
    } while (eat(','));
    expect(')');
    return n;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

inline Node parse(std::string_view s) { return Parser(s).parse_all(); }

// Keyword access with unknown-key detection.
class Args {
 public:
  explicit Args(const Node& call, std::size_t max_positional = 0) : call_(call) {
    if (call.kind != Node::Kind::Call && call.kind != Node::Kind::Ident)
      throw ParseError("expected a constructor such as Name(...)");
    if (call.items.size() > max_positional)
      throw ParseError(call.name + " takes keyword arguments only (name=value)");
    used_.assign(call.kwargs.size(), false);
  }

  const Node* find(std::string_view key) {
    for (std::size_t i = 0; i < call_.kwargs.size(); ++i)
      if (call_.kwargs[i].first == key) {
        used_[i] = true;
        return &call_.kwargs[i].second;
      }
    return nullptr;
  }

  double number(std::string_view key, double fallback) {
    const Node* n = find(key);
    if (!n) return fallback;
    if (n->kind != Node::Kind::Number) throw ParseError(call_.name + ": '" + std::string(key) + "' must be a number");
    return n->number;
  }

  std::size_t count(std::string_view key, std::size_t fallback) {
    const Node* n = find(key);
    if (!n) return fallback;
    return as_count(*n, key);
  }

  std::optional<std::size_t> optional_count(std::string_view key) {
    const Node* n = find(key);
    if (!n || (n->kind == Node::Kind::Ident && n->name == "auto")) return std::nullopt;
    return as_count(*n, key);
  }

  std::optional<double> optional_number(std::string_view key) {
    const Node* n = find(key);
    if (!n || (n->kind == Node::Kind::Ident && n->name == "auto")) return std::nullopt;
    if (n->kind != Node::Kind::Number) throw ParseError(call_.name + ": '" + std::string(key) + "' must be a number");
    return n->number;
  }

  const Node& positional(std::size_t i) const { return call_.items.at(i); }
  std::size_t positional_count() const { return call_.items.size(); }

  void finish() const {
    for (std::size_t i = 0; i < used_.size(); ++i)
      if (!used_[i]) throw ParseError(call_.name + ": unknown argument '" + call_.kwargs[i].first + "'");
  }

 private:
  std::size_t as_count(const Node& n, std::string_view key) const {
    if (n.kind != Node::Kind::Number || n.number < 0 || n.number != std::floor(n.number))
      throw ParseError(call_.name + ": '" + std::string(key) + "' must be a non-negative integer");
    return static_cast<std::size_t>(n.number);
  }

  const Node& call_;
  std::vector<bool> used_;
};

inline Stencil to_stencil(const Node& n) {
  if (n.kind != Node::Kind::List) throw ParseError("stencil must be a list of (row, col) pairs");
  Stencil s;
  for (const auto& item : n.items) {
    if (item.kind != Node::Kind::Tuple || item.items.size() != 2 || item.items[0].kind != Node::Kind::Number ||
        item.items[1].kind != Node::Kind::Number)
      throw ParseError("stencil entries must be (row, col) integer pairs");
    s.emplace_back(static_cast<std::ptrdiff_t>(item.items[0].number), static_cast<std::ptrdiff_t>(item.items[1].number));
  }
  return s;
}

inline OutcomeSpace to_space(const Node& n) {
  Args a(n);
  OutcomeSpace o;
  if (n.name == "UniqueElements") {
    o = UniqueElements{};
  } else if (n.name == "ValueBinning") {
    ValueBinning b;
    b.width = a.optional_number("width");
    b.bins = a.optional_count("bins");
    o = b;
  } else if (n.name == "OrdinalPatterns") {
    o = OrdinalPatterns{a.count("m", 3), a.count("tau", 1)};
  } else if (n.name == "Dispersion") {
    o = Dispersion{a.count("m", 2), a.count("tau", 1), a.count("c", 3)};
  } else if (n.name == "CosineSimilarityBinning") {
    o = CosineSimilarityBinning{a.count("m", 2), a.count("tau", 1), a.count("nbins", 5)};
  } else if (n.name == "BubbleSortSwaps") {
    o = BubbleSortSwaps{a.count("m", 3), a.count("tau", 1)};
  } else if (n.name == "PowerSpectrum") {
    o = PowerSpectrum{};
  } else if (n.name == "SpatialOrdinalPatterns") {
    SpatialOrdinalPatterns s;
    if (const Node* st = a.find("stencil")) s.stencil = to_stencil(*st);
    o = s;
  } else if (n.name == "SpatialDispersion") {
    SpatialDispersion s;
    if (const Node* st = a.find("stencil")) s.stencil = to_stencil(*st);
    s.c = a.count("c", 3);
    o = s;
  } else {
    throw ParseError("unknown outcome space '" + n.name + "'");
  }
  a.finish();
  validate(o);
  return o;
}

inline ProbEstimator to_prob(const Node& n) {
  Args a(n);
  ProbEstimator e;
  if (n.name == "RelativeAmount") e = RelativeAmount{};
  else if (n.name == "AddConstant") e = AddConstant{a.number("c", 1.0)};
  else if (n.name == "BayesianRegularization") e = BayesianRegularization{a.number("a", 1.0)};
  else if (n.name == "Shrinkage") e = Shrinkage{a.optional_number("lambda")};
  else throw ParseError("unknown probabilities estimator '" + n.name + "'");
  a.finish();
  validate(e);
  return e;
}

inline InfoMeasure to_measure(const Node& n);

inline PointwiseMeasure to_pointwise(const Node& n) {
  const InfoMeasure m = to_measure(n);
  return std::visit(
      [&](const auto& v) -> PointwiseMeasure {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_constructible_v<PointwiseMeasure, T>) return v;
        else throw ParseError("'" + n.name + "' has no pointwise information content");
      },
      m);
}

inline InfoMeasure to_measure(const Node& n) {
  Args a(n);
  InfoMeasure m;
  if (n.name == "Shannon") m = Shannon{a.number("base", 2.0)};
  else if (n.name == "Renyi") m = Renyi{a.number("q", 2.0), a.number("base", 2.0)};
  else if (n.name == "Tsallis") m = Tsallis{a.number("q", 2.0), a.number("k", 1.0)};
  else if (n.name == "Kaniadakis") m = Kaniadakis{a.number("kappa", 0.5)};
  else if (n.name == "Curado") m = Curado{a.number("b", 1.0)};
  else if (n.name == "StretchedExponential") m = StretchedExponential{a.number("eta", 2.0), a.number("base", 2.0)};
  else if (n.name == "ShannonExtropy") m = ShannonExtropy{a.number("base", 2.0)};
  else if (n.name == "RenyiExtropy") m = RenyiExtropy{a.number("q", 2.0), a.number("base", 2.0)};
  else if (n.name == "TsallisExtropy") m = TsallisExtropy{a.number("q", 2.0), a.number("k", 1.0)};
  else if (n.name == "FluctuationComplexity") {
    FluctuationComplexity f;
    if (const Node* inner = a.find("inner")) f.inner = to_pointwise(*inner);
    m = f;
  } else throw ParseError("unknown information measure '" + n.name + "'");
  a.finish();
  validate(m);
  return m;
}

// "PlugIn(Shannon())" or a bare definition, which implies PlugIn.
inline InfoEstimator to_info_estimator(const Node& n) {
  static const std::vector<std::pair<std::string, DiscreteEstimator>> kinds = {
      {"PlugIn", PlugIn{}},
      {"Jackknife", Jackknife{}},
      {"MillerMadow", MillerMadow{}},
      {"ChaoShen", ChaoShen{}},
      {"HorvitzThompson", HorvitzThompson{}},
  };
  for (const auto& [name, est] : kinds) {
    if (n.name != name) continue;
    Args a(n, 1);
    InfoEstimator ie;
    ie.estimator = est;
    if (a.positional_count() == 1) ie.definition = to_measure(a.positional(0));
    else if (const Node* d = a.find("definition")) ie.definition = to_measure(*d);
    a.finish();
    validate(ie);
    return ie;
  }
  return InfoEstimator{PlugIn{}, to_measure(n)};
}

inline Distance to_distance(const Node& n) {
  if (n.kind == Node::Kind::Ident || (n.kind == Node::Kind::Call && n.items.empty() && n.kwargs.empty())) {
    if (n.name == "JensenShannon") return Distance::JensenShannon;
    if (n.name == "Euclidean") return Distance::Euclidean;
  }
  throw ParseError("distance must be JensenShannon or Euclidean");
}

inline ComplexityEstimator to_complexity(const Node& n) {
  Args a(n);
  ComplexityEstimator c;
  if (n.name == "ApproximateEntropy") {
    c = ApproximateEntropy{a.count("m", 2), a.optional_number("r"), a.count("tau", 1)};
  } else if (n.name == "SampleEntropy") {
    c = SampleEntropy{a.count("m", 2), a.optional_number("r"), a.count("tau", 1)};
  } else if (n.name == "LempelZiv76") {
    LempelZiv76 l;
    if (const Node* e = a.find("encoder")) l.encoder = to_space(*e);
    c = l;
  } else if (n.name == "ReverseDispersion") {
    c = ReverseDispersion{a.count("m", 2), a.count("c", 3), a.count("tau", 1)};
  } else if (n.name == "MissingOutcomes") {
    MissingOutcomes mo;
    if (const Node* s = a.find("space")) mo.space = to_space(*s);
    c = mo;
  } else if (n.name == "StatisticalComplexity") {
    StatisticalComplexity sc;
    if (const Node* s = a.find("space")) sc.space = to_space(*s);
    if (const Node* p = a.find("probabilities")) sc.probabilities = to_prob(*p);
    if (const Node* e = a.find("estimator")) sc.estimator = to_info_estimator(*e);
    if (const Node* d = a.find("distance")) sc.distance = to_distance(*d);
    c = sc;
  } else if (n.name == "BubbleEntropy") {
    c = BubbleEntropy{a.count("m", 3), a.count("tau", 1)};
  } else {
    throw ParseError("unknown complexity estimator '" + n.name + "'");
  }
  a.finish();
  validate(c);
  return c;
}

inline DifferentialEstimator to_differential(const Node& n) {
  Args a(n);
  DifferentialEstimator d;
  if (n.name == "KozachenkoLeonenko") d = KozachenkoLeonenko{};
  else if (n.name == "Kraskov") d = Kraskov{a.count("k", 1)};
  else if (n.name == "Vasicek") d = Vasicek{a.optional_count("m")};
  else if (n.name == "Ebrahimi") d = Ebrahimi{a.optional_count("m")};
  else if (n.name == "Correa") d = Correa{a.optional_count("m")};
  else if (n.name == "AlizadehArghami") d = AlizadehArghami{a.optional_count("m")};
  else throw ParseError("unknown differential estimator '" + n.name + "'");
  a.finish();
  validate(d);
  return d;
}

inline Recipe to_recipe(const Node& n) {
  if (n.kind != Node::Kind::Call) throw ParseError("recipe must be information(...), complexity(...) or differential(...)");
  if (n.name == "information" || n.name == "information_normalized") {
    Args a(n, 3);
    InformationRecipe r;
    r.normalized = n.name == "information_normalized";
    const Node* est = a.positional_count() > 0 ? &a.positional(0) : a.find("estimator");
    const Node* prob = a.positional_count() > 1 ? &a.positional(1) : a.find("probabilities");
    const Node* space = a.positional_count() > 2 ? &a.positional(2) : a.find("space");
    if (est) r.estimator = to_info_estimator(*est);
    if (prob) r.probabilities = to_prob(*prob);
    if (!space) throw ParseError("information recipe needs an outcome space");
    r.space = to_space(*space);
    a.finish();
    return r;
  }
  if (n.name == "complexity") {
    Args a(n, 1);
    const Node* e = a.positional_count() ? &a.positional(0) : a.find("estimator");
    if (!e) throw ParseError("complexity recipe needs an estimator");
    ComplexityRecipe r{to_complexity(*e)};
    a.finish();
    return r;
  }
  if (n.name == "differential") {
    Args a(n, 1);
    const Node* e = a.positional_count() ? &a.positional(0) : a.find("estimator");
    if (!e) throw ParseError("differential recipe needs an estimator");
    DifferentialRecipe r{to_differential(*e), a.number("base", std::numbers::e)};
    a.finish();
    return r;
  }
  throw ParseError("unknown recipe family '" + n.name + "'");
}

}  // namespace recipe_syntax

inline Recipe parse_recipe(std::string_view s) { return recipe_syntax::to_recipe(recipe_syntax::parse(s)); }
inline OutcomeSpace parse_outcome_space(std::string_view s) { return recipe_syntax::to_space(recipe_syntax::parse(s)); }
inline ProbEstimator parse_prob_estimator(std::string_view s) { return recipe_syntax::to_prob(recipe_syntax::parse(s)); }
inline InfoEstimator parse_info_estimator(std::string_view s) {
  return recipe_syntax::to_info_estimator(recipe_syntax::parse(s));
}
inline ComplexityEstimator parse_complexity(std::string_view s) {
  return recipe_syntax::to_complexity(recipe_syntax::parse(s));
}
inline DifferentialEstimator parse_differential(std::string_view s) {
  return recipe_syntax::to_differential(recipe_syntax::parse(s));
}

}  // namespace cmx
