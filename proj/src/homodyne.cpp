// SPDX-License-Identifier: Apache-2.0
#include "spinsqueeze/homodyne.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace spinsqueeze {

namespace {

using cplx = std::complex<double>;

void require_photons(double n, const char* name) {
  if (!std::isfinite(n) || n < 0.0) {
    throw std::domain_error(std::string("FieldPair: ") + name +
                            " must be finite and non-negative");
  }
}

std::int64_t poisson(double mean, RandomStream& rng) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<std::int64_t> dist(mean);
  return dist(rng);
}

// Fock amplitudes <n|alpha> = exp(-|alpha|^2/2) alpha^n / sqrt(n!), built from
// log-magnitudes so large n neither overflows nor underflows prematurely.
std::vector<cplx> coherent_state(cplx alpha, int dimension) {
  std::vector<cplx> c(static_cast<std::size_t>(dimension), cplx{0.0, 0.0});
  const double r = std::abs(alpha);
  if (r == 0.0) {
    c[0] = 1.0;
    return c;
  }
  const double log_r = std::log(r);
  const double theta = std::arg(alpha);
  for (int n = 0; n < dimension; ++n) {
    const double log_mag = -0.5 * r * r + n * log_r - 0.5 * std::lgamma(n + 1.0);
    c[static_cast<std::size_t>(n)] = std::polar(std::exp(log_mag), n * theta);
  }
  return c;
}

// Two-mode state stored row-major as psi[r * dim + p] with r the reference
// level and p the probe level.
class TwoModeState {
 public:
  TwoModeState(int dimension, std::vector<cplx> amplitudes)
      : dim_(dimension), amp_(std::move(amplitudes)) {}

  static TwoModeState product(const std::vector<cplx>& reference,
                              const std::vector<cplx>& probe) {
    const int dim = static_cast<int>(reference.size());
    std::vector<cplx> amp(static_cast<std::size_t>(dim) * dim);
    for (int r = 0; r < dim; ++r) {
      for (int p = 0; p < dim; ++p) amp[idx(dim, r, p)] = reference[r] * probe[p];
    }
    return {dim, std::move(amp)};
  }

  cplx at(int r, int p) const {
    if (r < 0 || p < 0 || r >= dim_ || p >= dim_) return {0.0, 0.0};
    return amp_[idx(dim_, r, p)];
  }

  int dimension() const { return dim_; }
  const std::vector<cplx>& amplitudes() const { return amp_; }

  cplx inner(const TwoModeState& other) const {
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < amp_.size(); ++i) s += std::conj(amp_[i]) * other.amp_[i];
    return s;
  }

 private:
  static std::size_t idx(int dim, int r, int p) {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(dim) +
           static_cast<std::size_t>(p);
  }
  int dim_;
  std::vector<cplx> amp_;
};

// Truncated ladder operators: a|n> = sqrt(n)|n-1>, a^dag|n> = sqrt(n+1)|n+1>
// with a^dag|dim-1> dropped.
class LadderTable {
 public:
  explicit LadderTable(int dimension) : sqrt_n_(static_cast<std::size_t>(dimension) + 1) {
    for (std::size_t n = 0; n < sqrt_n_.size(); ++n) sqrt_n_[n] = std::sqrt(static_cast<double>(n));
  }
  double operator[](int n) const { return sqrt_n_[static_cast<std::size_t>(n)]; }

 private:
  std::vector<double> sqrt_n_;
};

// Applies i (a_p^dag a_r - a_r^dag a_p).
TwoModeState apply_difference_operator(const TwoModeState& psi, const LadderTable& sq) {
  const int dim = psi.dimension();
  std::vector<cplx> out(psi.amplitudes().size());
  const cplx i_unit{0.0, 1.0};
  for (int r = 0; r < dim; ++r) {
    for (int p = 0; p < dim; ++p) {
      // (a_p^dag a_r psi)(r, p): takes |r+1, p-1> to |r, p>.
      cplx raise_p{0.0, 0.0};
      if (p >= 1 && r + 1 < dim) raise_p = sq[r + 1] * sq[p] * psi.at(r + 1, p - 1);
      // (a_r^dag a_p psi)(r, p): takes |r-1, p+1> to |r, p>.
      cplx raise_r{0.0, 0.0};
      if (r >= 1 && p + 1 < dim) raise_r = sq[r] * sq[p + 1] * psi.at(r - 1, p + 1);
      out[static_cast<std::size_t>(r) * dim + p] = i_unit * (raise_p - raise_r);
    }
  }
  return {dim, std::move(out)};
}

}  // namespace

void FieldPair::validate() const {
  require_photons(n_probe, "n_probe");
  require_photons(n_reference, "n_reference");
  if (!std::isfinite(phase)) throw std::domain_error("FieldPair: phase must be finite");
}

double mean_difference(const FieldPair& f) {
  f.validate();
  return 2.0 * std::sqrt(f.n_reference * f.n_probe) * std::sin(f.phase);
}

double second_moment_difference(const FieldPair& f) {
  f.validate();
  const double s = std::sin(f.phase);
  return f.n_reference + f.n_probe + 4.0 * f.n_reference * f.n_probe * s * s;
}

double variance_fixed_phase(const FieldPair& f) {
  f.validate();
  return f.n_reference + f.n_probe;
}

PhaseNoiseVariance variance_fluctuating_phase(const FieldPair& f, double phase_variance,
                                              double linearization_limit) {
  f.validate();
  if (!(phase_variance >= 0.0)) {
    throw std::domain_error("variance_fluctuating_phase: phase variance must be >= 0");
  }
  return PhaseNoiseVariance{
      .value = f.n_reference + f.n_probe + 4.0 * f.n_reference * f.n_probe * phase_variance,
      .linearization_ok = std::sqrt(phase_variance) <= linearization_limit,
  };
}

DetectionRecord sample_counts(const FieldPair& f, RandomStream& rng) {
  f.validate();
  const double interference = 2.0 * std::sqrt(f.n_probe * f.n_reference) * std::sin(f.phase);
  const double total = f.n_probe + f.n_reference;
  // Rounding can push a mean a hair below zero when |sin phi| = 1 and n_p = n_r.
  const double mean_d1 = std::max(0.0, 0.5 * (total - interference));
  const double mean_d2 = std::max(0.0, 0.5 * (total + interference));
  DetectionRecord rec;
  rec.count_d1 = poisson(mean_d1, rng);
  rec.count_d2 = poisson(mean_d2, rng);
  rec.difference = rec.count_d2 - rec.count_d1;
  return rec;
}

FockOracleMoments fock_oracle_moments(std::complex<double> alpha_reference,
                                      std::complex<double> alpha_probe, int dimension) {
  if (dimension < 1) {
    throw std::domain_error("fock_oracle_moments: dimension must be >= 1");
  }
  const auto psi = TwoModeState::product(coherent_state(alpha_reference, dimension),
                                         coherent_state(alpha_probe, dimension));
  const LadderTable sq(dimension);
  const auto image = apply_difference_operator(psi, sq);
  // The operator is Hermitian, so <I^2> = || I psi ||^2.
  return FockOracleMoments{
      .mean = psi.inner(image).real(),
      .second_moment = image.inner(image).real(),
      .truncation_error = std::max(0.0, 1.0 - psi.inner(psi).real()),
  };
}

int recommended_fock_dimension(std::complex<double> alpha_reference,
                               std::complex<double> alpha_probe) noexcept {
  const double n_max = std::max(std::norm(alpha_reference), std::norm(alpha_probe));
  return static_cast<int>(std::ceil(10.0 * (n_max + 1.0)));
}

}  // namespace spinsqueeze
