#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "alloc_tracker.hpp"
#include "cmx/cli/batch.hpp"
#include "cmx/cli/bench.hpp"
#include "cmx/cli/config.hpp"
#include "cmx/cli/ingest.hpp"
#include "cmx/cmx.hpp"

namespace {

using namespace cmx;
using namespace cmx::cli;

struct InputFlags {
  std::string input;
  std::string format;
  std::vector<std::string> columns;
};

void add_input_flags(CLI::App* app, InputFlags& f, bool required) {
  auto* opt = app->add_option("--input", f.input, "Input data file");
  if (required) opt->required();
  app->add_option("--format", f.format, "Input format")->check(CLI::IsMember({"csv", "raw-f64", "pgm"}));
  app->add_option("--column", f.columns, "CSV column name or 0-based index (repeat for several)");
}

Dataset load_input(const InputFlags& f, const RecipeConfig* cfg) {
  std::string path = f.input;
  if (path.empty() && cfg && cfg->input_path) path = *cfg->input_path;
  if (path.empty()) throw ConfigError("no input given (use --input or [input].path)");
  InputFormat format = cfg ? cfg->input_format : InputFormat::Csv;
  if (!f.format.empty()) format = parse_input_format(f.format);
  CsvOptions csv = cfg ? cfg->csv : CsvOptions{};
  if (!f.columns.empty()) csv.columns = f.columns;
  return ingest(path, format, csv);
}

// Writes to `path` if given, else stdout.
template <class F>
void emit(const std::optional<std::string>& path, F&& write) {
  if (!path) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(*path);
  if (!out) throw IoError("cannot write '" + *path + "'");
  write(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Composable complexity and information measures for timeseries"};
  app.require_subcommand(1);

  InputFlags in;
  std::string config_path, output_format;
  std::size_t threads = default_threads();
  std::optional<std::string> out_path;

  auto* compute = app.add_subcommand("compute", "Run the recipes of a config file over one input");
  compute->add_option("--config", config_path, "Recipe config (TOML)")->required();
  add_input_flags(compute, in, false);
  compute->add_option("--output", output_format, "Output format")->check(CLI::IsMember({"csv", "jsonl"}));
  compute->add_option("--threads", threads, "Worker threads (default from CMX_THREADS, else 1)")
      ->check(CLI::PositiveNumber);
  compute->add_option("--out", out_path, "Write results to this file instead of stdout");

  std::string space_spec;
  auto* missing = app.add_subcommand("missing-outcomes", "Count possible outcomes absent from the data");
  missing->add_option("--space", space_spec, "Outcome space, e.g. 'OrdinalPatterns(m=3, tau=1)'")->required();
  add_input_flags(missing, in, true);

  std::size_t max_scale = 0;
  auto* ms = app.add_subcommand("multiscale", "Evaluate each recipe on coarse-grained copies of the input");
  ms->add_option("--config", config_path, "Recipe config (TOML)")->required();
  ms->add_option("--max-scale", max_scale, "Largest scale (overrides [multiscale].max_scale)")
      ->check(CLI::PositiveNumber);
  add_input_flags(ms, in, false);
  ms->add_option("--output", output_format, "Output format")->check(CLI::IsMember({"csv", "jsonl"}));
  ms->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  ms->add_option("--out", out_path, "Write results to this file instead of stdout");

  std::string recipe_spec;
  std::vector<std::size_t> sizes;
  std::uint64_t seed = 0;
  std::size_t runs = 10;
  auto* bn = app.add_subcommand("bench", "Time one recipe on seeded white noise of several lengths");
  bn->add_option("--recipe", recipe_spec, "Recipe, e.g. 'information(Shannon(), RelativeAmount(), OrdinalPatterns(m=4))'")
      ->required();
  bn->add_option("--sizes", sizes, "Input lengths")->required()->delimiter(',');
  bn->add_option("--seed", seed, "RNG seed")->required();
  bn->add_option("--runs", runs, "Timed runs per size (>= 10)")->check(CLI::Range(10, 1000000));
  bn->add_option("--output", output_format, "Output format")->check(CLI::IsMember({"csv", "jsonl"}));

  auto* reg = app.add_subcommand("registry", "Count the measure combinations the library implements");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*compute) {
      const auto cfg = load_config(config_path);
      const auto data = load_input(in, &cfg);
      const auto rows = run_batch(cfg, view(data), threads);
      const auto fmt = output_format.empty() ? cfg.output : parse_output_format(output_format);
      emit(out_path ? out_path : cfg.output_path, [&](std::ostream& os) { write_rows(os, rows, fmt); });
      return batch_exit_code(rows);
    }
    if (*missing) {
      const auto space = parse_outcome_space(space_spec);
      const auto data = load_input(in, nullptr);
      const auto dv = view(data);
      const auto m = missing_outcomes(space, dv);
      const auto total = *total_outcomes(space, dv);
      std::cout << "space,missing,total,fraction\n"
                << cmx::cli::detail::csv_field(describe(space)) << ',' << m << ',' << total << ','
                << cmx::detail::fmt_real(static_cast<double>(m) / static_cast<double>(total)) << '\n';
      return 0;
    }
    if (*ms) {
      const auto cfg = load_config(config_path);
      MultiscaleSpec spec = cfg.multiscale.value_or(MultiscaleSpec{});
      if (max_scale) spec.max_scale = max_scale;
      if (!max_scale && !cfg.multiscale) throw ConfigError("no max scale given (use --max-scale or [multiscale])");
      const auto data = load_input(in, &cfg);
      const auto* x = std::get_if<TimeSeries>(&data);
      if (!x) throw ConfigError("multiscale needs a single-column timeseries input");
      const auto rows = run_multiscale(cfg, spec, *x, threads);
      const auto fmt = output_format.empty() ? cfg.output : parse_output_format(output_format);
      emit(out_path ? out_path : cfg.output_path, [&](std::ostream& os) { write_rows(os, rows, fmt, true); });
      return batch_exit_code(rows);
    }
    if (*bn) {
      const auto recipe = parse_recipe(recipe_spec);
      const auto rep = bench(recipe, sizes, seed, runs, cmx::tools::allocation_probe());
      write_report(std::cout, rep, output_format.empty() ? OutputFormat::Csv : parse_output_format(output_format));
      return 0;
    }
    if (*reg) {
      const auto catalog = implemented_catalog();
      print_registry(std::cout, catalog, registry_count(catalog));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
