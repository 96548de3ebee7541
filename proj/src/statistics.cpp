// SPDX-License-Identifier: Apache-2.0
#include "spinsqueeze/statistics.hpp"

#include <cmath>
#include <stdexcept>

namespace spinsqueeze {

double SampleMoments::mean_standard_error() const {
  if (count < 2) return 0.0;
  return std::sqrt(variance / static_cast<double>(count));
}

double SampleMoments::variance_standard_error() const {
  if (count < 4) return 0.0;
  const double n = static_cast<double>(count);
  const double s2 = variance;
  const double v = (fourth_central - (n - 3.0) / (n - 1.0) * s2 * s2) / n;
  return std::sqrt(std::max(v, 0.0));
}

SampleMoments sample_moments(std::span<const double> samples) {
  SampleMoments out;
  out.count = samples.size();
  if (samples.empty()) return out;
  double sum = 0.0;
  for (double x : samples) sum += x;
  const double n = static_cast<double>(samples.size());
  out.mean = sum / n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double x : samples) {
    const double d = x - out.mean;
    const double d2 = d * d;
    m2 += d2;
    m4 += d2 * d2;
  }
  out.variance = samples.size() > 1 ? m2 / (n - 1.0) : 0.0;
  out.fourth_central = m4 / n;
  return out;
}

double sample_covariance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("sample_covariance: size mismatch");
  if (x.size() < 2) return 0.0;
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double c = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) c += (x[i] - mx) * (y[i] - my);
  return c / (n - 1.0);
}

}  // namespace spinsqueeze
