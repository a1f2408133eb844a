#include "kdebw/synthetic.hpp"

#include <random>

namespace kdebw::synthetic {

std::vector<double> standard_normal(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& v : out) v = dist(rng);
  return out;
}

std::vector<double> gaussian_mixture(std::size_t n, std::uint64_t seed,
                                     const std::vector<MixtureComponent>& components) {
  std::mt19937_64 rng(seed);
  std::vector<double> weights;
  for (const auto& c : components) weights.push_back(c.weight);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  std::normal_distribution<double> unit(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& v : out) {
    const auto& c = components[pick(rng)];
    v = c.mean + c.sd * unit(rng);
  }
  return out;
}

std::vector<double> three_component_mixture(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 shape(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> spread(1.5, 4.0);
  std::uniform_real_distribution<double> width(0.3, 1.2);
  std::uniform_real_distribution<double> weight(0.2, 0.5);
  const double gap1 = spread(shape);
  const double gap2 = spread(shape);
  return gaussian_mixture(n, seed, {{weight(shape), -gap1, width(shape)},
                                    {weight(shape), 0.0, width(shape)},
                                    {weight(shape), gap2, width(shape)}});
}

}  // namespace kdebw::synthetic
