#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "kdebw/plugin.hpp"

namespace kdebw {

struct BenchRow {
  std::size_t n = 0;
  Strategy strategy = Strategy::fast;
  double seconds = 0;
};

/// Median wall time of `repeats` runs after one untimed warm-up of the bandwidth pipeline (ingestion excluded).
[[nodiscard]] double time_bandwidth(const Dataset& x, const PluginConfig& config, int repeats = 5);

/// Times every strategy on a seeded standard normal sample of each size.
[[nodiscard]] std::vector<BenchRow> run_bench(std::span<const std::size_t> sizes,
                                              std::span<const Strategy> strategies, int repeats,
                                              std::uint64_t seed, unsigned threads = 1);

}  // namespace kdebw
