#include "kdebw/remez.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "kdebw/error.hpp"

namespace kdebw {

namespace {

using Matrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

constexpr int kMaxDegree = 16;

long double horner(const std::vector<long double>& c, long double t) noexcept {
  long double acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

struct Extremum {
  long double x;
  long double err;
};

class ErrorCurve {
 public:
  ErrorCurve(TargetFunction target, const std::vector<long double>& coefficients)
      : target_(target), coefficients_(coefficients) {}

  long double operator()(long double x) const {
    return horner(coefficients_, x) - evaluate_target(target_, x);
  }

 private:
  TargetFunction target_;
  const std::vector<long double>& coefficients_;
};

// Golden-section search for the maximum of sign * e(x) on [a, b].
Extremum refine(const ErrorCurve& e, long double a, long double b, long double sign) {
  constexpr long double kInvPhi = 0.6180339887498948482045868343656381L;
  long double c = b - kInvPhi * (b - a);
  long double d = a + kInvPhi * (b - a);
  long double fc = sign * e(c);
  long double fd = sign * e(d);
  for (int i = 0; i < 80 && b - a > 1e-18L * (1 + std::fabs(a) + std::fabs(b)); ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = sign * e(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = sign * e(d);
    }
  }
  Extremum best{(a + b) / 2, e((a + b) / 2)};
  for (long double x : {a, b}) {
    const long double v = e(x);
    if (sign * v > sign * best.err) best = {x, v};
  }
  return best;
}

// One extremum per maximal run of constant error sign over a dense grid, refined locally.
std::vector<Extremum> locate_extrema(const ErrorCurve& e, long double lo, long double hi,
                                     int grid_points) {
  std::vector<long double> xs(static_cast<std::size_t>(grid_points));
  std::vector<long double> es(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = lo + (hi - lo) * static_cast<long double>(i) / static_cast<long double>(grid_points - 1);
    es[i] = e(xs[i]);
  }

  std::vector<Extremum> out;
  std::size_t i = 0;
  while (i < xs.size()) {
    const bool positive = es[i] >= 0;
    std::size_t best = i;
    std::size_t j = i;
    for (; j < xs.size() && (es[j] >= 0) == positive; ++j) {
      if (std::fabs(es[j]) > std::fabs(es[best])) best = j;
    }
    const long double a = xs[best == 0 ? 0 : best - 1];
    const long double b = xs[std::min(best + 1, xs.size() - 1)];
    out.push_back(refine(e, a, b, positive ? 1.0L : -1.0L));
    i = j;
  }
  return out;
}

std::vector<long double> solve_reference(TargetFunction target,
                                         const std::vector<long double>& nodes, int degree) {
  const auto m = static_cast<Eigen::Index>(nodes.size());
  Matrix a(m, m);
  Vector rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    long double power = 1;
    for (Eigen::Index k = 0; k <= degree; ++k) {
      a(i, k) = power;
      power *= nodes[static_cast<std::size_t>(i)];
    }
    a(i, m - 1) = (i % 2 == 0) ? 1.0L : -1.0L;
    rhs(i) = evaluate_target(target, nodes[static_cast<std::size_t>(i)]);
  }
  const Vector sol = a.partialPivLu().solve(rhs);
  return {sol.data(), sol.data() + degree + 1};
}

void fill_fixed_forms(PolyApprox& poly) {
  poly.coefficients_q62.clear();
  for (long double c : poly.coefficients) {
    if (std::fabs(c) < 2.0L) {
      poly.coefficients_q62.emplace_back(static_cast<std::int64_t>(std::llroundl(c * 0x1p62L)));
    } else {
      poly.coefficients_q62.emplace_back(std::nullopt);
    }
  }
}

int count_equioscillation(const std::vector<Extremum>& ref, long double certified) {
  int count = 0;
  int last_sign = 0;
  for (const auto& p : ref) {
    if (std::fabs(p.err) < 0.99L * certified) continue;
    const int sign = p.err >= 0 ? 1 : -1;
    if (sign != last_sign) {
      ++count;
      last_sign = sign;
    }
  }
  return count;
}

}  // namespace

std::string_view to_string(TargetFunction f) noexcept {
  switch (f) {
    case TargetFunction::exp:
      return "exp";
  }
  return "unknown";
}

long double evaluate_target(TargetFunction f, long double x) {
  switch (f) {
    case TargetFunction::exp:
      return std::exp(x);
  }
  throw DomainError("unknown target function");
}

long double evaluate(const PolyApprox& poly, long double t) noexcept {
  return horner(poly.coefficients, t);
}

PolyApprox remez_minimax(TargetFunction target, long double lo, long double hi, int degree,
                         const RemezOptions& options) {
  if (degree < 0 || degree > kMaxDegree) {
    throw DomainError("remez degree must be in [0, " + std::to_string(kMaxDegree) + "]");
  }
  if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("remez domain must satisfy lo <= hi");
  }

  PolyApprox poly;
  poly.target = target;
  poly.degree = degree;
  poly.lo = lo;
  poly.hi = hi;

  if (lo == hi) {
    poly.coefficients.assign(static_cast<std::size_t>(degree) + 1, 0.0L);
    poly.coefficients[0] = evaluate_target(target, lo);
    poly.equioscillation_points = degree + 2;
    fill_fixed_forms(poly);
    return poly;
  }

  const int refs = degree + 2;
  std::vector<long double> nodes(static_cast<std::size_t>(refs));
  for (int i = 0; i < refs; ++i) {
    const long double angle = std::numbers::pi_v<long double> * i / (refs - 1);
    nodes[static_cast<std::size_t>(i)] = (lo + hi) / 2 - (hi - lo) / 2 * std::cos(angle);
  }

  const int grid = std::max(2001, 400 * refs);
  std::vector<Extremum> reference;
  bool converged = false;
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    poly.coefficients = solve_reference(target, nodes, degree);
    poly.iterations = iter;
    const ErrorCurve curve(target, poly.coefficients);

    reference = locate_extrema(curve, lo, hi, grid);
    if (static_cast<int>(reference.size()) < refs) {
      throw ConvergenceError("error curve has fewer than degree + 2 sign changes");
    }
    while (static_cast<int>(reference.size()) > refs) {
      if (std::fabs(reference.front().err) < std::fabs(reference.back().err)) {
        reference.erase(reference.begin());
      } else {
        reference.pop_back();
      }
    }

    long double emax = 0;
    long double emin = std::numeric_limits<long double>::infinity();
    for (const auto& p : reference) {
      emax = std::max(emax, std::fabs(p.err));
      emin = std::min(emin, std::fabs(p.err));
    }
    if (emax == 0 || (emax - emin) / emax < options.relative_spread) {
      converged = true;
      break;
    }
    for (int i = 0; i < refs; ++i) nodes[static_cast<std::size_t>(i)] = reference[static_cast<std::size_t>(i)].x;
  }
  if (!converged) {
    throw ConvergenceError("remez exchange did not converge in " +
                           std::to_string(options.max_iterations) + " iterations");
  }

  const ErrorCurve curve(target, poly.coefficients);
  long double certified = 0;
  const int samples = std::max(options.certification_samples, 2);
  for (int i = 0; i < samples; ++i) {
    const long double x = lo + (hi - lo) * static_cast<long double>(i) / (samples - 1);
    certified = std::max(certified, std::fabs(curve(x)));
  }
  for (const auto& p : reference) certified = std::max(certified, std::fabs(p.err));

  poly.certified_max_abs_error = certified;
  poly.equioscillation_points = count_equioscillation(reference, certified);
  fill_fixed_forms(poly);
  return poly;
}

}  // namespace kdebw
