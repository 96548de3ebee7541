// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <functional>

namespace spinsqueeze {

struct GoldenSectionResult {
  double x;
  double fx;
  int iterations;
};

/// Minimizes a unimodal f on [lo, hi]; stops once the bracket is narrower
/// than tol * (1 + |x|).
inline GoldenSectionResult golden_section_minimize(const std::function<double(double)>& f,
                                                   double lo, double hi, double tol = 1e-12,
                                                   int max_iterations = 500) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int it = 0;
  for (; it < max_iterations; ++it) {
    if (std::abs(b - a) <= tol * (1.0 + std::abs(0.5 * (a + b)))) break;
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = fc < fd ? c : d;
  return {x, fc < fd ? fc : fd, it};
}

}  // namespace spinsqueeze
