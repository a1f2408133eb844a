#pragma once

// Command-line front end. `run_cli` parses arguments and dispatches; exit status is 0 on
// success, 1 on a library error, 2 on a usage error.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "kdebw/ingest.hpp"
#include "kdebw/plugin.hpp"

namespace kdebw::cli {

enum class Command { bandwidth, compare, kde, bench, remez_gen };
enum class OutputFormat { json, plain };

struct RunConfig {
  Command command = Command::bandwidth;
  std::filesystem::path input;
  InputSpec input_spec;
  Strategy strategy = Strategy::fast;
  OutputFormat format = OutputFormat::json;
  unsigned threads = 1;

  // kde
  std::optional<double> h;
  std::optional<double> grid_lo;
  std::optional<double> grid_hi;
  std::size_t grid_points = 512;
  std::filesystem::path output;

  // bench
  std::vector<std::size_t> sizes{128, 256, 512, 1024};
  std::vector<Strategy> bench_strategies{Strategy::literal, Strategy::minimal, Strategy::fast};
  int repeats = 5;
  std::uint64_t seed = 1;

  // remez-gen
  int degree = 7;
  std::optional<double> lo;
  std::optional<double> hi;
};

/// Executes a parsed configuration, writing the payload to `out`. Library errors propagate.
void run(const RunConfig& config, std::ostream& out);

/// Parses argv and runs. Errors are reported on `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kdebw::cli
