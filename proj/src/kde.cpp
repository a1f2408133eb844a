#include "kdebw/kde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "kdebw/error.hpp"

namespace kdebw {

GridSpec default_grid(const Dataset& x, double h, std::size_t points) {
  const auto [lo, hi] = std::minmax_element(x.values().begin(), x.values().end());
  return GridSpec{*lo - 5.0 * h, *hi + 5.0 * h, points};
}

double kde_eval(std::span<const double> sample, double h, double x) {
  if (!(h > 0)) throw DomainError("kde bandwidth must be positive");
  if (sample.empty()) throw EmptyInputError("kde needs at least one sample point");
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  double sum = 0;
  for (double xi : sample) {
    const double u = (x - xi) / h;
    sum += std::exp(-0.5 * u * u);
  }
  return inv_sqrt_2pi * sum / (static_cast<double>(sample.size()) * h);
}

KdeCurve kde_curve(std::span<const double> sample, double h, const GridSpec& grid) {
  if (grid.points == 0) throw DomainError("kde grid needs at least one point");
  KdeCurve curve;
  curve.h = h;
  curve.n = sample.size();
  curve.grid.resize(grid.points);
  curve.density.resize(grid.points);
  const double step =
      grid.points > 1 ? (grid.hi - grid.lo) / static_cast<double>(grid.points - 1) : 0.0;
  for (std::size_t i = 0; i < grid.points; ++i) {
    curve.grid[i] = grid.lo + step * static_cast<double>(i);
    curve.density[i] = kde_eval(sample, h, curve.grid[i]);
  }
  return curve;
}

double integrate(const KdeCurve& curve) noexcept {
  double area = 0;
  for (std::size_t i = 1; i < curve.grid.size(); ++i) {
    area += 0.5 * (curve.density[i] + curve.density[i - 1]) * (curve.grid[i] - curve.grid[i - 1]);
  }
  return area;
}

std::size_t count_local_maxima(const KdeCurve& curve) noexcept {
  std::size_t count = 0;
  const auto& d = curve.density;
  for (std::size_t i = 1; i + 1 < d.size(); ++i) {
    if (d[i] > d[i - 1] && d[i] > d[i + 1]) ++count;
  }
  return count;
}

void write_csv(std::ostream& out, const KdeCurve& curve) {
  out << "x,density\n";
  char line[80];
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", curve.grid[i], curve.density[i]);
    out << line;
  }
}

}  // namespace kdebw
