// SPDX-License-Identifier: Apache-2.0
#include "spinsqueeze/atomic_ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace spinsqueeze {

EnsembleSpec::EnsembleSpec(std::int64_t n_atoms) : n_atoms_(n_atoms) {
  if (n_atoms < 1) {
    throw std::domain_error("EnsembleSpec: n_atoms must be >= 1, got " +
                            std::to_string(n_atoms));
  }
}

DickeProjection DickeProjection::from_value(double m) {
  const double twice = 2.0 * m;
  if (!std::isfinite(twice) || twice != std::round(twice)) {
    throw std::domain_error("DickeProjection: 2m must be an integer");
  }
  return DickeProjection(static_cast<std::int64_t>(twice));
}

bool DickeProjection::valid_for(const EnsembleSpec& spec) const noexcept {
  const std::int64_t n = spec.n_atoms();
  if (twice_m_ < -n || twice_m_ > n) return false;
  return ((n + twice_m_) % 2) == 0;
}

double log_css_dicke_weight(const EnsembleSpec& spec, DickeProjection m) {
  if (!m.valid_for(spec)) {
    throw std::domain_error("css_dicke_weight: m = " + std::to_string(m.value()) +
                            " is not a Dicke projection for N = " +
                            std::to_string(spec.n_atoms()));
  }
  const auto n = static_cast<double>(spec.n_atoms());
  // Order the two factorials by size so that m and -m give identical bits.
  const auto up = m.up_count(spec);
  const auto lo = static_cast<double>(std::min(up, spec.n_atoms() - up));
  const auto hi = static_cast<double>(std::max(up, spec.n_atoms() - up));
  return std::lgamma(n + 1.0) - (std::lgamma(lo + 1.0) + std::lgamma(hi + 1.0)) -
         n * std::numbers::ln2;
}

double css_dicke_weight(const EnsembleSpec& spec, DickeProjection m) {
  return std::exp(log_css_dicke_weight(spec, m));
}

CssMoments css_moments(const EnsembleSpec& spec) noexcept {
  const auto n = static_cast<double>(spec.n_atoms());
  return CssMoments{
      .mean_m = 0.0,
      .var_m = n / 4.0,
      .var_population_difference = n,
      .mean_population_up = n / 2.0,
      .var_population_up = n / 4.0,
  };
}

DickeProjection sample_dicke(const EnsembleSpec& spec, RandomStream& rng) {
  std::binomial_distribution<std::int64_t> up(spec.n_atoms(), 0.5);
  return DickeProjection::from_up_count(spec, up(rng));
}

}  // namespace spinsqueeze
