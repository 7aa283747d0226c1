#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <toml.hpp>

#include "cmx/cli/ingest.hpp"
#include "cmx/multiscale.hpp"
#include "cmx/recipe.hpp"

namespace cmx::cli {

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(Axis::Config, what) {}
};

enum class OutputFormat { Csv, Jsonl };

inline OutputFormat parse_output_format(std::string_view s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "jsonl") return OutputFormat::Jsonl;
  throw ConfigError("unknown output format '" + std::string(s) + "' (expected csv or jsonl)");
}

// A recipe whose text parsed but whose parameters were rejected still
// occupies its slot; it is reported as an error row at run time.
struct RecipeEntry {
  std::string name;
  std::optional<Recipe> recipe;
  std::string spec;   // source text, for error rows
  std::string error;  // set iff !recipe
};

struct RecipeConfig {
  std::optional<std::string> input_path;
  InputFormat input_format = InputFormat::Csv;
  CsvOptions csv;
  OutputFormat output = OutputFormat::Csv;
  std::optional<std::string> output_path;
  std::optional<MultiscaleSpec> multiscale;
  std::vector<RecipeEntry> recipes;
};

namespace detail {

inline void reject_unknown(const toml::table& t, std::initializer_list<std::string_view> keys, const std::string& where) {
  for (const auto& [k, v] : t) {
    bool ok = false;
    for (auto key : keys) ok = ok || k.str() == key;
    if (!ok) throw ConfigError(where + ": unknown key '" + std::string(k.str()) + "'");
  }
}

inline std::optional<std::string> get_string(const toml::table& t, std::string_view key, const std::string& where) {
  const auto* node = t.get(key);
  if (!node) return std::nullopt;
  if (!node->is_string()) throw ConfigError(where + ": '" + std::string(key) + "' must be a string");
  return node->value<std::string>();
}

// Either a full recipe string or axis keys.
inline std::string recipe_text(const toml::table& t, const std::string& where) {
  reject_unknown(t,
                 {"name", "recipe", "outcome_space", "probabilities", "estimator", "definition", "normalized",
                  "complexity", "differential", "base"},
                 where);
  const auto full = get_string(t, "recipe", where);
  const auto space = get_string(t, "outcome_space", where);
  const auto probs = get_string(t, "probabilities", where);
  const auto est = get_string(t, "estimator", where);
  const auto def = get_string(t, "definition", where);
  const auto cplx = get_string(t, "complexity", where);
  const auto diff = get_string(t, "differential", where);
  const auto* norm = t.get("normalized");
  const auto* base = t.get("base");
  if (norm && !norm->is_boolean()) throw ConfigError(where + ": 'normalized' must be true or false");
  if (base && !base->is_number()) throw ConfigError(where + ": 'base' must be a number");

  const int families = (full ? 1 : 0) + ((space || probs || est || def || norm) ? 1 : 0) + (cplx ? 1 : 0) + (diff ? 1 : 0);
  if (families != 1)
    throw ConfigError(where +
                      ": give exactly one of 'recipe', discrete-pipeline keys, 'complexity' or 'differential'");
  if (base && !diff) throw ConfigError(where + ": 'base' applies to differential recipes only");
  if (full) return *full;
  if (cplx) return "complexity(" + *cplx + ")";
  if (diff) {
    std::string s = "differential(" + *diff;
    if (base) s += ", base=" + cmx::detail::fmt_real(base->value<double>().value());
    return s + ")";
  }
  if (!space) throw ConfigError(where + ": discrete recipe needs 'outcome_space'");
  if (est && def) throw ConfigError(where + ": give 'estimator' or 'definition', not both");
  const bool normalized = norm && norm->value<bool>().value();
  return std::string(normalized ? "information_normalized(" : "information(") +
         (est ? *est : def ? *def : std::string("Shannon()")) + ", " + probs.value_or("RelativeAmount()") + ", " +
         *space + ")";
}

}  // namespace detail

// Structural problems (syntax, unknown keys, unparseable recipe text) throw
// ConfigError before anything runs.
inline RecipeConfig parse_config(std::string_view text, const std::string& source = "config") {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    const auto& where = e.source().begin;
    throw ConfigError(source + ":" + std::to_string(where.line) + ":" + std::to_string(where.column) + ": " +
                      std::string(e.description()));
  }
  detail::reject_unknown(root, {"input", "output", "multiscale", "recipe"}, source);

  RecipeConfig cfg;
  if (const auto* in = root.get("input")) {
    if (!in->is_table()) throw ConfigError("[input] must be a table");
    const auto& t = *in->as_table();
    detail::reject_unknown(t, {"path", "format", "column", "columns", "header"}, "[input]");
    cfg.input_path = detail::get_string(t, "path", "[input]");
    if (auto f = detail::get_string(t, "format", "[input]")) {
      try {
        cfg.input_format = parse_input_format(*f);
      } catch (const Error& e) {
        throw ConfigError(std::string("[input]: ") + e.what());
      }
    }
    if (const auto* c = t.get("column")) {
      if (c->is_string()) cfg.csv.columns.push_back(c->value<std::string>().value());
      else if (c->is_integer()) cfg.csv.columns.push_back(std::to_string(c->value<std::int64_t>().value()));
      else throw ConfigError("[input]: 'column' must be a name or an index");
    }
    if (const auto* c = t.get("columns")) {
      if (!c->is_array()) throw ConfigError("[input]: 'columns' must be an array");
      for (const auto& item : *c->as_array()) {
        if (item.is_string()) cfg.csv.columns.push_back(item.value<std::string>().value());
        else if (item.is_integer()) cfg.csv.columns.push_back(std::to_string(item.value<std::int64_t>().value()));
        else throw ConfigError("[input]: 'columns' entries must be names or indices");
      }
    }
    if (const auto* h = t.get("header")) {
      if (!h->is_boolean()) throw ConfigError("[input]: 'header' must be true or false");
      cfg.csv.header = h->value<bool>();
    }
  }
  if (const auto* out = root.get("output")) {
    if (!out->is_table()) throw ConfigError("[output] must be a table");
    const auto& t = *out->as_table();
    detail::reject_unknown(t, {"format", "path"}, "[output]");
    if (auto f = detail::get_string(t, "format", "[output]")) cfg.output = parse_output_format(*f);
    cfg.output_path = detail::get_string(t, "path", "[output]");
  }
  if (const auto* ms = root.get("multiscale")) {
    if (!ms->is_table()) throw ConfigError("[multiscale] must be a table");
    const auto& t = *ms->as_table();
    detail::reject_unknown(t, {"max_scale"}, "[multiscale]");
    const auto s = t["max_scale"].value<std::int64_t>();
    if (!s || *s < 1) throw ConfigError("[multiscale]: 'max_scale' must be an integer >= 1");
    cfg.multiscale = MultiscaleSpec{static_cast<std::size_t>(*s)};
  }

  const auto* recipes = root.get("recipe");
  if (!recipes || !recipes->is_array_of_tables() || recipes->as_array()->empty())
    throw ConfigError("config needs at least one [[recipe]] table");
  std::size_t index = 0;
  for (const auto& node : *recipes->as_array()) {
    const auto& t = *node.as_table();
    const std::string where = "[[recipe]] #" + std::to_string(++index);
    RecipeEntry e;
    e.name = detail::get_string(t, "name", where).value_or("recipe" + std::to_string(index));
    e.spec = detail::recipe_text(t, where);
    try {
      e.recipe = parse_recipe(e.spec);
    } catch (const ParseError& err) {
      throw ConfigError(where + ": " + err.what());
    } catch (const Error& err) {
      e.error = err.what();
    }
    cfg.recipes.push_back(std::move(e));
  }
  return cfg;
}

// Reads and parses a config file.
inline RecipeConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = read_file(path, false);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  auto cfg = parse_config(text, path);
  // Relative paths in the file are relative to the file itself.
  const auto dir = std::filesystem::path(path).parent_path();
  for (auto* p : {&cfg.input_path, &cfg.output_path})
    if (*p && std::filesystem::path(**p).is_relative()) **p = (dir / **p).lexically_normal().string();
  return cfg;
}

}  // namespace cmx::cli
