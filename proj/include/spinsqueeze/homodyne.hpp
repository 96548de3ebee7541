// SPDX-License-Identifier: Apache-2.0
//
// Balanced homodyne detection of a coherent probe against a coherent
// reference on a 50/50 beam splitter. The differential signal is
// I_- = D2 - D1, so a positive relative phase gives a positive mean.
#pragma once

#include <complex>
#include <cstdint>
#include <optional>

#include "spinsqueeze/atomic_ensemble.hpp"
#include "spinsqueeze/rng.hpp"

namespace spinsqueeze {

/// Mean photon numbers of the probe and reference pulses and their relative
/// phase (radians).
struct FieldPair {
  double n_probe = 0.0;
  double n_reference = 0.0;
  double phase = 0.0;

  /// Throws std::domain_error on negative or non-finite photon numbers.
  void validate() const;
};

struct DetectionRecord {
  std::int64_t count_d1 = 0;
  std::int64_t count_d2 = 0;
  std::int64_t difference = 0;  // count_d2 - count_d1
  std::optional<DickeProjection> latent_m;
};

/// Default standard deviation (rad) above which sin(phi) ~ phi is flagged.
inline constexpr double kDefaultLinearizationLimit = 0.1;

double mean_difference(const FieldPair& fields);
double second_moment_difference(const FieldPair& fields);
/// Shot noise n_r + n_p; independent of the phase.
double variance_fixed_phase(const FieldPair& fields);

struct PhaseNoiseVariance {
  double value;
  /// False when the phase standard deviation exceeds the linearization limit;
  /// the value is then only a small-angle estimate.
  bool linearization_ok;
};

/// Law-of-total-variance result for a phase fluctuating about zero:
/// n_r + n_p + 4 n_r n_p var(phi). `fields.phase` is ignored.
PhaseNoiseVariance variance_fluctuating_phase(
    const FieldPair& fields, double phase_variance,
    double linearization_limit = kDefaultLinearizationLimit);

/// The two detector counts are independent Poisson variables with means
/// (n_p + n_r -/+ 2 sqrt(n_p n_r) sin phi) / 2, so the difference is Skellam.
DetectionRecord sample_counts(const FieldPair& fields, RandomStream& rng);

struct FockOracleMoments {
  double mean;
  double second_moment;
  /// Probability mass of the two coherent states beyond the truncation,
  /// 1 - <psi|psi> of the truncated product state.
  double truncation_error;
};

/// Evaluates <I_-> and <I_-^2> for I_- = i(a_p^dag a_r - a_r^dag a_p) on the
/// product coherent state |alpha_r, alpha_p>, in a Fock space truncated to
/// `dimension` levels per mode. Independent of the closed forms above.
/// Throws std::domain_error if dimension < 1.
FockOracleMoments fock_oracle_moments(std::complex<double> alpha_reference,
                                      std::complex<double> alpha_probe, int dimension);

/// dimension that keeps truncation negligible for the given amplitudes.
int recommended_fock_dimension(std::complex<double> alpha_reference,
                               std::complex<double> alpha_probe) noexcept;

}  // namespace spinsqueeze
