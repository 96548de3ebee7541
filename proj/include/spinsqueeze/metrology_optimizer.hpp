// SPDX-License-Identifier: Apache-2.0
//
// Decoherence from spontaneous scattering and the photon-number tradeoff for
// metrologically relevant squeezing.
//
// A probe of n_p photons gains information kappa^2 (linear in n_p for strong
// local oscillators) while a fraction eta = (Gamma k / Delta) n_p of the atoms
// scatters a photon and the Bloch vector shrinks by (1 - eta). Squeezing is
// metrologically relevant when (1 + kappa^2)^-1 < (1 - eta)^2.
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace spinsqueeze {

/// Raised when eta >= 1: every atom has scattered and no Bloch vector is left.
class InvalidOperatingPoint : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct DecoherenceModel {
  double gamma = 0.0;     // linewidth
  double detuning = 0.0;  // same units as gamma
  double mean_k = 0.0;    // phase per atom
  double n_probe = 0.0;   // photons per probe

  /// Throws std::domain_error for non-positive linewidth, zero detuning, or
  /// negative k / photon number.
  void validate() const;
  /// Gamma k / Delta: eta per probe photon.
  double eta_per_photon() const;
};

/// eta = Gamma k n_p / Delta. Throws InvalidOperatingPoint when eta >= 1.
double eta(const DecoherenceModel& model);

/// Photons spontaneously scattered by N atoms, n_p (Gamma k / Delta) N,
/// equal to 2 n_p alpha with absorption alpha = (Gamma k / Delta)(N / 2).
double scattered_photons(const DecoherenceModel& model, std::int64_t n_atoms);

struct SqueezingReport {
  double kappa_squared = 0.0;
  double eta = 0.0;
  double metrological_ratio = 1.0;  // xi^2 = 1 / [(1 + kappa^2)(1 - eta)^2]
  double squeezing_db = 0.0;        // -10 log10(xi^2)
  bool criterion_met = false;       // xi^2 < 1
};

/// Throws InvalidOperatingPoint unless 0 <= eta < 1.
SqueezingReport evaluate_point(double kappa_squared, double eta_value);
SqueezingReport evaluate_point(double kappa_squared, const DecoherenceModel& model);

/// Variances (in units of m^2) that make up the noise graph for one point.
struct NoiseBudgetPoint {
  double n_probe = 0.0;
  double projection_var = 0.0;   // N / 4
  double conditional_var = 0.0;  // (N / 4) / (1 + kappa^2)
  double benchmark_var = 0.0;    // (1 - eta)^2 N / 4
  SqueezingReport report;
};

/// Linear photon-number tradeoff: kappa^2 = kappa_per_photon * n_p and
/// eta = eta_per_photon * n_p.
struct PhotonTradeoff {
  double kappa_per_photon = 0.0;  // 2 k^2 N for strong local oscillators
  double eta_per_photon = 0.0;    // Gamma k / Delta

  double xi_squared(double n_probe) const;
  SqueezingReport report(double n_probe) const;
};

struct PhotonOptimum {
  /// False when kappa_per_photon <= 2 eta_per_photon; then n_p_star = 0.
  bool improves = false;
  double n_p_star = 0.0;      // (A - 2B) / (3 A B)
  double eta_star = 0.0;      // (1 - 2B/A) / 3
  double kappa_sq_star = 0.0;
  SqueezingReport best_report;
  /// Golden-section minimizer of log xi^2 over n_p in (0, 1/B), searched in
  /// log n_p. Serves as the cross-check on the closed form.
  double numeric_n_p = 0.0;
  double numeric_xi_squared = 1.0;
};

/// Minimizes xi^2(n_p) = 1 / [(1 + A n_p)(1 - B n_p)^2] with A the kappa^2
/// and B the eta gained per photon.
PhotonOptimum optimize_photon_number(double kappa_per_photon, double eta_per_photon);

/// Numeric minimization for an arbitrary kappa^2(n_p), e.g. the exact
/// g^2 N / (4 n_sn) form that saturates when n_p approaches n_r. Returns
/// n_p in (0, 1/eta_per_photon).
PhotonOptimum optimize_photon_number_numeric(const std::function<double(double)>& kappa_of_np,
                                             double eta_per_photon);

enum class KappaForm { StrongLocalOscillator, Exact };

/// Physical inputs for the tradeoff of one probe at one detuning.
struct ProbeTradeoffInputs {
  double c_constant = 0.0;
  double gamma = 0.0;
  double detuning = 0.0;
  std::int64_t n_atoms = 0;
  /// Reference photons per channel; only used by KappaForm::Exact, where
  /// n_r = m_r and n_p = m_p.
  double n_reference = 0.0;

  double mean_k() const { return c_constant / detuning; }
  PhotonTradeoff strong_lo_tradeoff() const;
  double kappa_squared(double n_probe, KappaForm form) const;
};

PhotonOptimum optimize_probe(const ProbeTradeoffInputs& inputs,
                             KappaForm form = KappaForm::StrongLocalOscillator);

/// Noise graph over a list of probe photon numbers; points with eta >= 1 are
/// skipped.
std::vector<NoiseBudgetPoint> noise_budget_sweep(const PhotonTradeoff& tradeoff,
                                                 std::int64_t n_atoms,
                                                 std::span<const double> photon_numbers);

struct DetuningInvarianceReport {
  double detuning_1 = 0.0;
  double detuning_2 = 0.0;
  PhotonOptimum optimum_1;
  PhotonOptimum optimum_2;
  double n_p_ratio = 0.0;           // n_p*(detuning_2) / n_p*(detuning_1)
  double expected_n_p_ratio = 0.0;  // (detuning_2 / detuning_1)^2
  double xi_squared_rel_diff = 0.0;
  bool invariant = false;  // xi^2 agree to 1e-10 and n_p ratio to 1e-12
};

/// Optimizes the strong-LO tradeoff at two detunings. Both detunings must
/// satisfy |Delta| >= min_ratio * gamma.
DetuningInvarianceReport detuning_invariance_check(const ProbeTradeoffInputs& base,
                                                   double detuning_1, double detuning_2,
                                                   double min_ratio = 10.0);

}  // namespace spinsqueeze
