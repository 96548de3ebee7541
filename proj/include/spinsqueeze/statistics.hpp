// SPDX-License-Identifier: Apache-2.0
//
// Sample moments with standard errors, reduced sequentially in index order
// so the result is independent of how the samples were produced.
#pragma once

#include <cstddef>
#include <span>

namespace spinsqueeze {

struct SampleMoments {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;       // unbiased, divides by count - 1
  double fourth_central = 0.0;  // biased fourth central moment

  double mean_standard_error() const;
  /// Standard error of the unbiased sample variance, from the sample
  /// fourth moment (valid for non-Gaussian data).
  double variance_standard_error() const;
};

SampleMoments sample_moments(std::span<const double> samples);

/// Unbiased sample covariance of two equally long sequences.
double sample_covariance(std::span<const double> x, std::span<const double> y);

}  // namespace spinsqueeze
