// SPDX-License-Identifier: Apache-2.0
//
// Bayesian decimation of the Dicke distribution by a homodyne outcome.
//
// Given the atoms in |N/2, M>, the differential signal is Gaussian with mean
// g M and variance n_sn. Conditioning the Gaussian CSS prior exp[-M^2/(N/2)]
// on an outcome n leaves a Gaussian with variance (N/4)/(1 + kappa^2) centred
// at n kappa^2 / [g (1 + kappa^2)], where kappa^2 = g^2 N / (4 n_sn).
#pragma once

#include <cstdint>
#include <vector>

#include "spinsqueeze/atomic_ensemble.hpp"
#include "spinsqueeze/probe_schemes.hpp"

namespace spinsqueeze {

struct MeasurementGain {
  double g = 0.0;     // signal per unit m
  double n_sn = 1.0;  // shot-noise variance of the outcome

  /// Throws std::domain_error unless g is finite and n_sn > 0.
  void validate() const;

  /// g = 4 sqrt(n_r n_p) <k>, n_sn = n_r + n_p + m_r + m_p.
  static MeasurementGain from_dual_probe(const ProbeChannel& up_channel,
                                         const ProbeChannel& down_channel);
};

struct PosteriorState {
  double mean_m = 0.0;
  double var_m = 0.0;
  double kappa_squared = 0.0;
  /// False when N is below the threshold where the Gaussian prior is trusted.
  bool gaussian_prior_ok = true;
};

/// Gaussian density of outcome n given projection m.
double likelihood(double outcome_n, DickeProjection m, const MeasurementGain& gain);

/// kappa^2 = g^2 N / (4 n_sn): projection noise over shot noise in the signal.
double kappa_squared(const MeasurementGain& gain, std::int64_t n_atoms);

/// Strong equal local oscillators (n_r = m_r >> n_p = m_p): kappa^2 = 2 k^2 N n_p.
double kappa_squared_strong_lo(double mean_k, std::int64_t n_atoms, double n_probe);

inline constexpr std::int64_t kDefaultGaussianPriorMinAtoms = 100;

PosteriorState posterior(double outcome_n, const EnsembleSpec& spec, const MeasurementGain& gain,
                         std::int64_t gaussian_prior_min_atoms = kDefaultGaussianPriorMinAtoms);

struct DiscretePosterior {
  std::vector<double> m_values;
  std::vector<double> weights;  // normalized
  double mean = 0.0;
  double variance = 0.0;
};

inline constexpr std::int64_t kDiscretePosteriorMaxAtoms = 5000;

/// Brute-force Bayes over every m with the exact binomial prior.
/// Throws std::length_error for N > kDiscretePosteriorMaxAtoms.
DiscretePosterior exact_discrete_posterior(double outcome_n, const EnsembleSpec& spec,
                                           const MeasurementGain& gain);

struct ConditionalExperimentResult {
  std::int64_t trials = 0;
  double kappa_squared = 0.0;
  /// var(n2 / g) - n_sn / g^2, an estimate of N/4.
  double prior_var_estimate = 0.0;
  /// var(n2 / g - mu(n1)) - n_sn / g^2, with mu the posterior mean from n1.
  /// For g = 0 no second-probe estimate exists and the latent value is used.
  double conditional_var_estimate = 0.0;
  /// Standard error of conditional_var_estimate.
  double conditional_var_se = 0.0;
  /// var(m - mu(n1)) using the simulated latent projection.
  double conditional_var_latent = 0.0;
  /// var over trials of the posterior mean; with the posterior variance this
  /// closes the law of total variance at N/4.
  double posterior_mean_var = 0.0;
  double predicted_conditional_var = 0.0;  // (N/4) / (1 + kappa^2)
};

/// Two QND probes per trial at a fixed m: the first conditions the state, the
/// second tests the prediction. Outcomes are drawn from the Gaussian
/// likelihood. Trial i uses RandomStream(seed, i, substream).
ConditionalExperimentResult conditional_experiment(const EnsembleSpec& spec,
                                                   const MeasurementGain& gain,
                                                   std::int64_t trials, std::uint64_t seed,
                                                   unsigned threads = 1,
                                                   std::uint32_t substream = 0);

}  // namespace spinsqueeze
