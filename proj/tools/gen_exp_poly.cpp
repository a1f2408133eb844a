// Emits the embedded minimax coefficients used by exp_remez as a C++ header.
//
//   gen_exp_poly <output.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>

#include "kdebw/elementary.hpp"
#include "kdebw/remez.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gen_exp_poly <output.hpp>\n";
    return 2;
  }
  const long double half_ln2 = std::numbers::ln2_v<long double> / 2;
  const auto poly = kdebw::remez_minimax(kdebw::TargetFunction::exp, -half_ln2, half_ln2,
                                         kdebw::kExpPolyDegree);

  std::ofstream out(argv[1]);
  out << "// Generated by gen_exp_poly. Do not edit.\n"
      << "#pragma once\n\n#include <array>\n#include <cstdint>\n\n"
      << "namespace kdebw::detail {\n\n";
  out << "// Minimax e^t on [-ln2/2, ln2/2], degree " << poly.degree << ", "
      << poly.iterations << " exchange iterations.\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6Le", poly.certified_max_abs_error);
  out << "inline constexpr long double kExpPolyCertifiedError = " << buf << "L;\n\n";
  out << "// Signed Q2.62, ascending powers.\n"
      << "inline constexpr std::array<std::int64_t, " << poly.degree + 1 << "> kExpPolyQ62 = {\n";
  for (std::size_t i = 0; i < poly.coefficients.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.21Lg", poly.coefficients[i]);
    out << "    " << *poly.coefficients_q62[i] << "LL,  // " << buf << "\n";
  }
  out << "};\n\n}  // namespace kdebw::detail\n";
  return out ? 0 : 1;
}
