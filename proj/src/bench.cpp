#include "kdebw/bench.hpp"

#include <algorithm>
#include <chrono>

#include "kdebw/synthetic.hpp"

namespace kdebw {

double time_bandwidth(const Dataset& x, const PluginConfig& config, int repeats) {
  static_cast<void>(bandwidth(x, config));  // untimed warm-up: page faults, frequency ramp
  std::vector<double> samples;
  for (int r = 0; r < std::max(repeats, 1); ++r) {
    const auto start = std::chrono::steady_clock::now();
    const BandwidthResult result = bandwidth(x, config);
    const auto stop = std::chrono::steady_clock::now();
    static_cast<void>(result);
    samples.push_back(std::chrono::duration<double>(stop - start).count());
  }
  std::nth_element(samples.begin(), samples.begin() + samples.size() / 2, samples.end());
  return samples[samples.size() / 2];
}

std::vector<BenchRow> run_bench(std::span<const std::size_t> sizes, std::span<const Strategy> strategies,
                                int repeats, std::uint64_t seed, unsigned threads) {
  std::vector<BenchRow> rows;
  for (std::size_t n : sizes) {
    const Dataset x(synthetic::standard_normal(n, seed));
    for (Strategy s : strategies) {
      PluginConfig config;
      config.strategy = s;
      config.threads = threads;
      rows.push_back(BenchRow{n, s, time_bandwidth(x, config, repeats)});
    }
  }
  return rows;
}

}  // namespace kdebw
