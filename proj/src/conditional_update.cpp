// SPDX-License-Identifier: Apache-2.0
#include "spinsqueeze/conditional_update.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "spinsqueeze/parallel.hpp"
#include "spinsqueeze/statistics.hpp"

namespace spinsqueeze {

void MeasurementGain::validate() const {
  if (!std::isfinite(g)) throw std::domain_error("MeasurementGain: g must be finite");
  if (!std::isfinite(n_sn) || n_sn <= 0.0) {
    throw std::domain_error("MeasurementGain: n_sn must be > 0");
  }
}

MeasurementGain MeasurementGain::from_dual_probe(const ProbeChannel& up_channel,
                                                 const ProbeChannel& down_channel) {
  MeasurementGain gain{
      .g = 4.0 * std::sqrt(up_channel.reference_photons * up_channel.probe_photons) *
           up_channel.coupling.mean_k,
      .n_sn = shot_noise(up_channel.reference_photons, up_channel.probe_photons,
                         down_channel.reference_photons, down_channel.probe_photons),
  };
  gain.validate();
  return gain;
}

double likelihood(double outcome_n, DickeProjection m, const MeasurementGain& gain) {
  gain.validate();
  const double d = outcome_n - gain.g * m.value();
  return std::exp(-d * d / (2.0 * gain.n_sn)) / std::sqrt(2.0 * std::numbers::pi * gain.n_sn);
}

double kappa_squared(const MeasurementGain& gain, std::int64_t n_atoms) {
  gain.validate();
  return gain.g * gain.g * static_cast<double>(n_atoms) / (4.0 * gain.n_sn);
}

double kappa_squared_strong_lo(double mean_k, std::int64_t n_atoms, double n_probe) {
  return 2.0 * mean_k * mean_k * static_cast<double>(n_atoms) * n_probe;
}

PosteriorState posterior(double outcome_n, const EnsembleSpec& spec, const MeasurementGain& gain,
                         std::int64_t gaussian_prior_min_atoms) {
  const double n = static_cast<double>(spec.n_atoms());
  const double k2 = kappa_squared(gain, spec.n_atoms());
  // g N / (4 n_sn) * n / (1 + kappa^2) stays finite at g = 0.
  return PosteriorState{
      .mean_m = gain.g * n / (4.0 * gain.n_sn) * outcome_n / (1.0 + k2),
      .var_m = (n / 4.0) / (1.0 + k2),
      .kappa_squared = k2,
      .gaussian_prior_ok = spec.n_atoms() >= gaussian_prior_min_atoms,
  };
}

DiscretePosterior exact_discrete_posterior(double outcome_n, const EnsembleSpec& spec,
                                           const MeasurementGain& gain) {
  gain.validate();
  if (spec.n_atoms() > kDiscretePosteriorMaxAtoms) {
    throw std::length_error("exact_discrete_posterior: N = " + std::to_string(spec.n_atoms()) +
                            " exceeds " + std::to_string(kDiscretePosteriorMaxAtoms));
  }
  const std::int64_t n = spec.n_atoms();
  DiscretePosterior out;
  out.m_values.reserve(static_cast<std::size_t>(n + 1));
  std::vector<double> log_w;
  log_w.reserve(static_cast<std::size_t>(n + 1));
  double log_max = -INFINITY;
  for (std::int64_t up = 0; up <= n; ++up) {
    const auto m = DickeProjection::from_up_count(spec, up);
    const double d = outcome_n - gain.g * m.value();
    const double lw = log_css_dicke_weight(spec, m) - d * d / (2.0 * gain.n_sn);
    out.m_values.push_back(m.value());
    log_w.push_back(lw);
    log_max = std::max(log_max, lw);
  }
  out.weights.resize(log_w.size());
  double total = 0.0;
  for (std::size_t i = 0; i < log_w.size(); ++i) {
    out.weights[i] = std::exp(log_w[i] - log_max);
    total += out.weights[i];
  }
  double mean = 0.0;
  for (std::size_t i = 0; i < log_w.size(); ++i) {
    out.weights[i] /= total;
    mean += out.weights[i] * out.m_values[i];
  }
  double var = 0.0;
  for (std::size_t i = 0; i < log_w.size(); ++i) {
    const double d = out.m_values[i] - mean;
    var += out.weights[i] * d * d;
  }
  out.mean = mean;
  out.variance = var;
  return out;
}

ConditionalExperimentResult conditional_experiment(const EnsembleSpec& spec,
                                                   const MeasurementGain& gain,
                                                   std::int64_t trials, std::uint64_t seed,
                                                   unsigned threads, std::uint32_t substream) {
  gain.validate();
  if (trials < 2) throw std::domain_error("conditional_experiment: need at least 2 trials");
  const auto count = static_cast<std::size_t>(trials);
  std::vector<double> residual_second(count);  // n2/g - mu(n1)
  std::vector<double> scaled_second(count);    // n2/g
  std::vector<double> residual_latent(count);  // m - mu(n1)
  std::vector<double> posterior_mean(count);
  const double sigma = std::sqrt(gain.n_sn);
  const bool has_gain = gain.g != 0.0;

  parallel_for(trials, threads, [&](std::int64_t i) {
    RandomStream rng(seed, static_cast<std::uint64_t>(i), substream);
    const DickeProjection m = sample_dicke(spec, rng);
    std::normal_distribution<double> noise(0.0, sigma);
    const double n1 = gain.g * m.value() + noise(rng);
    const double n2 = gain.g * m.value() + noise(rng);
    const double mu = posterior(n1, spec, gain).mean_m;
    const auto slot = static_cast<std::size_t>(i);
    posterior_mean[slot] = mu;
    residual_latent[slot] = m.value() - mu;
    if (has_gain) {
      scaled_second[slot] = n2 / gain.g;
      residual_second[slot] = n2 / gain.g - mu;
    }
  });

  ConditionalExperimentResult out;
  out.trials = trials;
  out.kappa_squared = kappa_squared(gain, spec.n_atoms());
  out.predicted_conditional_var =
      (static_cast<double>(spec.n_atoms()) / 4.0) / (1.0 + out.kappa_squared);
  const auto latent = sample_moments(residual_latent);
  out.conditional_var_latent = latent.variance;
  out.posterior_mean_var = sample_moments(posterior_mean).variance;
  if (has_gain) {
    const double detector = gain.n_sn / (gain.g * gain.g);
    const auto resid = sample_moments(residual_second);
    out.prior_var_estimate = sample_moments(scaled_second).variance - detector;
    out.conditional_var_estimate = resid.variance - detector;
    out.conditional_var_se = resid.variance_standard_error();
  } else {
    out.prior_var_estimate = latent.variance;
    out.conditional_var_estimate = latent.variance;
    out.conditional_var_se = latent.variance_standard_error();
  }
  return out;
}

}  // namespace spinsqueeze
