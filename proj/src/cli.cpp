#include "kdebw/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <numbers>

#include "CLI11.hpp"
#include "kdebw/bench.hpp"
#include "kdebw/kde.hpp"
#include "kdebw/oracle.hpp"
#include "kdebw/remez.hpp"
#include "kdebw/report.hpp"

namespace kdebw::cli {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

PluginConfig plugin_config(const RunConfig& c) {
  PluginConfig p;
  p.strategy = c.strategy;
  p.threads = c.threads;
  return p;
}

void run_bandwidth(const RunConfig& c, std::ostream& out) {
  const Dataset x = ingest(c.input, c.input_spec);
  const BandwidthResult r = bandwidth(x, plugin_config(c));
  if (c.format == OutputFormat::json) {
    out << to_json(r, x.size()).dump(2) << "\n";
  } else {
    out << fmt17(decode(r.h_final)) << "\n";
  }
}

void run_compare(const RunConfig& c, std::ostream& out) {
  const Dataset x = ingest(c.input, c.input_spec);
  const auto report = oracle::compare(x, plugin_config(c));
  if (c.format == OutputFormat::json) {
    out << to_json(report).dump(2) << "\n";
    return;
  }
  out << "n " << report.n << "\nstrategy " << to_string(report.strategy) << "\n";
  out << "h_fixed " << fmt17(report.h_fixed) << "\nh_ref " << fmt17(report.h_ref) << "\n";
  out << "delta_percent " << fmt17(report.delta_percent) << "\n";
  for (const auto& s : report.per_step) {
    out << s.name << " " << fmt17(s.fixed) << " " << fmt17(s.ref) << " " << fmt17(s.delta_percent) << "\n";
  }
}

void run_kde(const RunConfig& c, std::ostream& out) {
  const Dataset x = ingest(c.input, c.input_spec);
  const double h = c.h ? *c.h : decode(bandwidth(x, plugin_config(c)).h_final);
  GridSpec grid = default_grid(x, h, c.grid_points);
  if (c.grid_lo) grid.lo = *c.grid_lo;
  if (c.grid_hi) grid.hi = *c.grid_hi;
  const KdeCurve curve = kde_curve(x.values(), h, grid);
  if (c.output.empty()) {
    write_csv(out, curve);
    return;
  }
  std::ofstream file(c.output);
  if (!file) throw Error("cannot open output file '" + c.output.string() + "'");
  write_csv(file, curve);
}

void run_bench_command(const RunConfig& c, std::ostream& out) {
  const auto rows = run_bench(c.sizes, c.bench_strategies, c.repeats, c.seed, c.threads);
  if (c.format == OutputFormat::json) {
    out << to_json(rows).dump(2) << "\n";
    return;
  }
  out << std::setprecision(6);
  out << "n strategy seconds\n";
  for (const auto& r : rows) out << r.n << " " << to_string(r.strategy) << " " << r.seconds << "\n";
}

void run_remez(const RunConfig& c, std::ostream& out) {
  const long double half_ln2 = std::numbers::ln2_v<long double> / 2;
  const long double lo = c.lo ? static_cast<long double>(*c.lo) : -half_ln2;
  const long double hi = c.hi ? static_cast<long double>(*c.hi) : half_ln2;
  out << to_json(remez_minimax(TargetFunction::exp, lo, hi, c.degree)).dump(2) << "\n";
}

// Enum-valued flags are read as strings and resolved after parsing.
struct RawFlags {
  std::string input_format = "lines";
  std::string strategy = "fast";
  std::string format = "json";
  std::vector<std::string> strategies{"literal", "minimal", "fast"};
};

void add_input_options(CLI::App* sub, RunConfig& c, RawFlags& raw, bool required) {
  auto* opt = sub->add_option("--input", c.input, "Input data file");
  if (required) opt->required();
  sub->add_option("--input-format", raw.input_format, "lines | csv")->check(CLI::IsMember({"lines", "csv"}));
  sub->add_option("--column", c.input_spec.column, "CSV column name or 0-based index");
}

void add_strategy_option(CLI::App* sub, RawFlags& raw) {
  sub->add_option("--strategy", raw.strategy, "literal | minimal | fast")
      ->check(CLI::IsMember({"literal", "minimal", "fast"}));
}

void add_format_option(CLI::App* sub, RawFlags& raw) {
  sub->add_option("--format", raw.format, "json | plain")->check(CLI::IsMember({"json", "plain"}));
}

void resolve(const RawFlags& raw, RunConfig& c) {
  c.input_spec.format = raw.input_format == "csv" ? InputFormat::csv : InputFormat::lines;
  c.strategy = parse_strategy(raw.strategy);
  c.format = raw.format == "plain" ? OutputFormat::plain : OutputFormat::json;
  c.bench_strategies.clear();
  for (const auto& s : raw.strategies) c.bench_strategies.push_back(parse_strategy(s));
}

}  // namespace

void run(const RunConfig& config, std::ostream& out) {
  switch (config.command) {
    case Command::bandwidth:
      run_bandwidth(config, out);
      break;
    case Command::compare:
      run_compare(config, out);
      break;
    case Command::kde:
      run_kde(config, out);
      break;
    case Command::bench:
      run_bench_command(config, out);
      break;
    case Command::remez_gen:
      run_remez(config, out);
      break;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  RawFlags raw;
  CLI::App app{"PLUGIN bandwidth selection on a Q32.32 fixed-point datapath model", "kdebw"};
  app.fallthrough();  // --threads may follow the subcommand
  app.require_subcommand(1);
  app.add_option("--threads", c.threads, "Worker threads for the pair sums")->check(CLI::Range(1u, 256u));

  auto* bw = app.add_subcommand("bandwidth", "Compute the PLUGIN bandwidth");
  add_input_options(bw, c, raw, true);
  add_strategy_option(bw, raw);
  add_format_option(bw, raw);

  auto* cmp = app.add_subcommand("compare", "Relative error of the fixed-point pipeline against binary64");
  add_input_options(cmp, c, raw, true);
  add_strategy_option(cmp, raw);
  add_format_option(cmp, raw);

  auto* kde = app.add_subcommand("kde", "Export a KDE curve as CSV");
  kde->set_help_flag("--help", "Print this help message and exit");  // frees -h
  add_input_options(kde, c, raw, true);
  add_strategy_option(kde, raw);
  kde->add_option("--h", c.h, "Bandwidth (default: PLUGIN bandwidth)")->check(CLI::PositiveNumber);
  kde->add_option("--grid-lo", c.grid_lo, "Grid start (default: min X - 5h)");
  kde->add_option("--grid-hi", c.grid_hi, "Grid end (default: max X + 5h)");
  kde->add_option("--grid-points", c.grid_points, "Grid resolution")->check(CLI::PositiveNumber);
  kde->add_option("--output", c.output, "CSV output path (default: stdout)");

  auto* bench = app.add_subcommand("bench", "Time each strategy over a list of sample sizes");
  bench->add_option("--sizes", c.sizes, "Comma-separated sample sizes")->delimiter(',')->check(CLI::Range(2u, 1u << 20));
  bench->add_option("--strategies", raw.strategies, "Comma-separated strategies")
      ->delimiter(',')
      ->check(CLI::IsMember({"literal", "minimal", "fast"}));
  bench->add_option("--repeats", c.repeats, "Repetitions per point (median reported)")->check(CLI::Range(1, 1000));
  bench->add_option("--seed", c.seed, "Sample generator seed");
  add_format_option(bench, raw);

  auto* remez = app.add_subcommand("remez-gen", "Generate minimax coefficients for e^t");
  remez->add_option("--degree", c.degree, "Polynomial degree")->check(CLI::Range(0, 16));
  remez->add_option("--lo", c.lo, "Domain start (default: -ln2/2)");
  remez->add_option("--hi", c.hi, "Domain end (default: ln2/2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  resolve(raw, c);
  if (bw->parsed()) c.command = Command::bandwidth;
  if (cmp->parsed()) c.command = Command::compare;
  if (kde->parsed()) c.command = Command::kde;
  if (bench->parsed()) c.command = Command::bench;
  if (remez->parsed()) c.command = Command::remez_gen;

  try {
    run(c, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace kdebw::cli
