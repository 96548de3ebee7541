// SPDX-License-Identifier: Apache-2.0
//
// Coherent spin state (CSS) of N two-level atoms, represented by its
// distribution over Dicke projections M of the collective J_z.
#pragma once

#include <cstdint>

#include "spinsqueeze/rng.hpp"

namespace spinsqueeze {

/// An ensemble of N two-level atoms prepared in the CSS on the equator.
class EnsembleSpec {
 public:
  /// Throws std::domain_error unless n_atoms >= 1.
  explicit EnsembleSpec(std::int64_t n_atoms);

  std::int64_t n_atoms() const noexcept { return n_atoms_; }
  double bloch_radius() const noexcept { return 0.5 * static_cast<double>(n_atoms_); }

  friend bool operator==(const EnsembleSpec&, const EnsembleSpec&) = default;

 private:
  std::int64_t n_atoms_;
};

/// A J_z eigenvalue m, stored as the integer 2m so half-integers are exact.
class DickeProjection {
 public:
  static DickeProjection from_twice_m(std::int64_t twice_m) noexcept {
    return DickeProjection(twice_m);
  }
  /// m = n_up - N/2.
  static DickeProjection from_up_count(const EnsembleSpec& spec, std::int64_t n_up) noexcept {
    return DickeProjection(2 * n_up - spec.n_atoms());
  }
  /// Accepts m as a real; throws std::domain_error if 2m is not an integer.
  static DickeProjection from_value(double m);

  double value() const noexcept { return 0.5 * static_cast<double>(twice_m_); }
  std::int64_t twice_m() const noexcept { return twice_m_; }

  /// |m| <= N/2 and N/2 + m integral.
  bool valid_for(const EnsembleSpec& spec) const noexcept;

  /// Population of the upper state, N/2 + m. Requires valid_for(spec).
  std::int64_t up_count(const EnsembleSpec& spec) const noexcept {
    return (spec.n_atoms() + twice_m_) / 2;
  }
  /// Population difference N_up - N_down = 2m.
  std::int64_t population_difference() const noexcept { return twice_m_; }

  friend bool operator==(const DickeProjection&, const DickeProjection&) = default;

 private:
  explicit DickeProjection(std::int64_t twice_m) noexcept : twice_m_(twice_m) {}
  std::int64_t twice_m_;
};

struct CssMoments {
  double mean_m;
  double var_m;
  double var_population_difference;
  double mean_population_up;
  double var_population_up;
};

/// |<N/2, m | CSS>|^2 = 2^-N C(N, N/2 + m), evaluated through log-gamma.
/// Throws std::domain_error if m is not a valid projection for spec.
double css_dicke_weight(const EnsembleSpec& spec, DickeProjection m);

/// Natural log of css_dicke_weight; finite for every valid m up to N ~ 1e9.
double log_css_dicke_weight(const EnsembleSpec& spec, DickeProjection m);

CssMoments css_moments(const EnsembleSpec& spec) noexcept;

/// Draws m = B - N/2 with B ~ Binomial(N, 1/2).
DickeProjection sample_dicke(const EnsembleSpec& spec, RandomStream& rng);

}  // namespace spinsqueeze
