#pragma once

// Gaussian kernel density estimation in binary64, for curve export and sanity checks.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "kdebw/plugin.hpp"

namespace kdebw {

struct GridSpec {
  double lo = 0;
  double hi = 0;
  std::size_t points = 512;
};

/// [min X - 5h, max X + 5h] at the given resolution.
[[nodiscard]] GridSpec default_grid(const Dataset& x, double h, std::size_t points = 512);

struct KdeCurve {
  std::vector<double> grid;
  std::vector<double> density;
  double h = 0;
  std::size_t n = 0;
};

/// f(x, h) = (1/(n h)) sum K((x - X_i)/h). DomainError if h <= 0.
[[nodiscard]] double kde_eval(std::span<const double> sample, double h, double x);

/// Evaluates on `points` evenly spaced nodes from lo to hi; a single point sits at lo.
[[nodiscard]] KdeCurve kde_curve(std::span<const double> sample, double h, const GridSpec& grid);

/// Trapezoidal integral of the curve.
[[nodiscard]] double integrate(const KdeCurve& curve) noexcept;

/// Strict interior local maxima of the density.
[[nodiscard]] std::size_t count_local_maxima(const KdeCurve& curve) noexcept;

/// CSV with header `x,density` and 17 significant digits.
void write_csv(std::ostream& out, const KdeCurve& curve);

}  // namespace kdebw
