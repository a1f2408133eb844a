#pragma once

// Seeded sample generators for tests, benchmarks and accuracy sweeps.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace kdebw::synthetic {

struct MixtureComponent {
  double weight;
  double mean;
  double sd;
};

[[nodiscard]] std::vector<double> standard_normal(std::size_t n, std::uint64_t seed);

/// Draws a component by weight, then a normal variate from it.
[[nodiscard]] std::vector<double> gaussian_mixture(std::size_t n, std::uint64_t seed,
                                                   const std::vector<MixtureComponent>& components);

/// A three-component mixture whose shape varies with the seed.
[[nodiscard]] std::vector<double> three_component_mixture(std::size_t n, std::uint64_t seed);

}  // namespace kdebw::synthetic
