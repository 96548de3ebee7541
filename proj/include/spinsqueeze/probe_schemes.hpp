// SPDX-License-Identifier: Apache-2.0
//
// Atom-dependent phase models for single-color and two-color (dual) probing,
// detuning-dependent coupling constants, and the analytic noise budgets of
// the differential homodyne signal.
#pragma once

#include <cstdint>

#include "spinsqueeze/atomic_ensemble.hpp"
#include "spinsqueeze/homodyne.hpp"
#include "spinsqueeze/rng.hpp"

namespace spinsqueeze {

/// Phase shift per atom k (rad) and its shot-to-shot variance (rad^2).
struct CouplingStatistics {
  double mean_k = 0.0;
  double var_k = 0.0;

  void validate() const;
  friend bool operator==(const CouplingStatistics&, const CouplingStatistics&) = default;
};

/// Minimum |detuning| / linewidth for the dispersive 1/detuning law.
inline constexpr double kDefaultDispersiveRatio = 10.0;

/// A probe detuned from a closed optical transition. `c_constant` lumps the
/// atomic parameters and geometry so that k = c / detuning.
struct DispersiveLine {
  double c_constant = 0.0;
  double detuning = 0.0;
  double linewidth = 0.0;
  double detuning_std = 0.0;

  /// Throws std::domain_error when an invariant fails, including
  /// |detuning| < min_ratio * linewidth.
  void validate(double min_ratio = kDefaultDispersiveRatio) const;
};

struct BackgroundPhase {
  double mean_phi0 = 0.0;
  double var_phi0 = 0.0;

  void validate() const;
};

/// One homodyne interferometer: probe and reference photon numbers, the
/// coupling of its probe to the atoms, and the atom-independent background.
struct ProbeChannel {
  double probe_photons = 0.0;
  double reference_photons = 0.0;
  CouplingStatistics coupling;
  BackgroundPhase background;

  void validate() const;
};

/// mean_k = c / detuning; var_k from first-order propagation of the probe
/// frequency jitter, (c * detuning_std / detuning^2)^2.
CouplingStatistics coupling_from_line(const DispersiveLine& line,
                                      double min_ratio = kDefaultDispersiveRatio);

struct LoOffset {
  double radians;
  /// True when the uncompensated signal would sit outside the small-angle
  /// regime, i.e. |offset| > small_angle_limit.
  bool exceeds_small_angle;
};

/// Local-oscillator phase <phi0> + <k> N / 2 that centers a single-probe
/// signal on a CSS at zero.
LoOffset lo_offset(const ProbeChannel& channel, std::int64_t n_atoms,
                   double small_angle_limit = kDefaultLinearizationLimit);

/// One shot of phi_up = k n_up + phi0 - offset, with k and phi0 drawn as
/// independent Gaussians from the channel statistics.
double single_probe_phase(const ProbeChannel& channel, std::int64_t n_atoms, std::int64_t n_up,
                          RandomStream& rng);

struct DualProbePhases {
  double up;
  double down;
};

/// One shot of the two-color phases with a shared draw of k and phi0:
///   up   =  (k N_up   + phi0) - offset
///   down = -(k N_down + phi0) + offset
/// so that up + down = k (N_up - N_down). Uses the up channel's statistics.
DualProbePhases dual_probe_phases(const ProbeChannel& up_channel, std::int64_t n_atoms,
                                  std::int64_t n_up, RandomStream& rng);

/// Analytic var(I_-) for a single probe on a CSS:
///   n_r + n_p + n_r n_p {[<k>^2 + var(k) N + var(k)] N + 4 var(phi0)}.
double single_probe_variance(const ProbeChannel& channel, std::int64_t n_atoms);

/// Relative tolerance on n_r n_p = m_r m_p and on coupling equality.
inline constexpr double kDualProbeMatchTolerance = 1e-6;

/// Analytic var(I_-) for two-color probing on a CSS:
///   n_r + n_p + m_r + m_p + 4 n_r n_p [<k>^2 + var(k)] N.
/// Throws std::invalid_argument when the couplings differ or the photon
/// products do not match within kDualProbeMatchTolerance.
double dual_probe_variance(const ProbeChannel& up_channel, const ProbeChannel& down_channel,
                           std::int64_t n_atoms);

/// n_sn = n_r + n_p + m_r + m_p.
double shot_noise(double n_r, double n_p, double m_r, double m_p);

struct ProbeCriterion {
  bool dual_ok;
  bool single_ok;
  double dual_ratio;    // var(k) / <k>^2
  double single_ratio;  // var(k) N / <k>^2
};

/// var(k) << <k>^2 (dual) and var(k) << <k>^2 / N (single), with "<<"
/// read as "at most strictness times".
ProbeCriterion single_probe_criterion(const ProbeChannel& channel, std::int64_t n_atoms,
                                      double strictness = 0.01);

/// Full simulated shot: sample M, build the phase, sample both detectors.
DetectionRecord simulate_single_probe(const ProbeChannel& channel, const EnsembleSpec& spec,
                                      RandomStream& rng);

/// Full simulated two-color shot. The two differential signals are added to
/// form one composite record; detector counts are summed per port.
DetectionRecord simulate_dual_probe(const ProbeChannel& up_channel,
                                    const ProbeChannel& down_channel, const EnsembleSpec& spec,
                                    RandomStream& rng);

}  // namespace spinsqueeze
