// SPDX-License-Identifier: Apache-2.0
#include "spinsqueeze/probe_schemes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace spinsqueeze {

namespace {

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

bool close_rel(double a, double b, double tol) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= tol * scale;
}

double draw_gaussian(double mean, double variance, RandomStream& rng) {
  if (variance <= 0.0) return mean;
  std::normal_distribution<double> dist(mean, std::sqrt(variance));
  return dist(rng);
}

void check_dual_preconditions(const ProbeChannel& up, const ProbeChannel& down) {
  up.validate();
  down.validate();
  const auto& ku = up.coupling;
  const auto& kd = down.coupling;
  if (!close_rel(ku.mean_k, kd.mean_k, kDualProbeMatchTolerance) ||
      !close_rel(ku.var_k, kd.var_k, kDualProbeMatchTolerance)) {
    std::ostringstream msg;
    msg << "dual probe: couplings must match (k_up = k_down); got <k> " << ku.mean_k << " vs "
        << kd.mean_k << ", var(k) " << ku.var_k << " vs " << kd.var_k;
    throw std::invalid_argument(msg.str());
  }
  const double prod_up = up.reference_photons * up.probe_photons;
  const double prod_down = down.reference_photons * down.probe_photons;
  if (!close_rel(prod_up, prod_down, kDualProbeMatchTolerance)) {
    std::ostringstream msg;
    msg << "dual probe: n_r n_p = m_r m_p required; got " << prod_up << " vs " << prod_down;
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

void CouplingStatistics::validate() const {
  if (!finite_nonneg(mean_k)) throw std::domain_error("coupling: mean_k must be >= 0");
  if (!finite_nonneg(var_k)) throw std::domain_error("coupling: var_k must be >= 0");
}

void DispersiveLine::validate(double min_ratio) const {
  if (!std::isfinite(c_constant)) throw std::domain_error("line: c_constant must be finite");
  if (!std::isfinite(detuning) || detuning == 0.0) {
    throw std::domain_error("line: detuning must be finite and non-zero");
  }
  if (!std::isfinite(linewidth) || linewidth <= 0.0) {
    throw std::domain_error("line: linewidth must be > 0");
  }
  if (!finite_nonneg(detuning_std)) throw std::domain_error("line: detuning_std must be >= 0");
  if (std::abs(detuning) < min_ratio * linewidth) {
    std::ostringstream msg;
    msg << "line: |detuning| = " << std::abs(detuning) << " is below " << min_ratio
        << " x linewidth = " << min_ratio * linewidth
        << "; the dispersive 1/detuning coupling does not apply";
    throw std::domain_error(msg.str());
  }
}

void BackgroundPhase::validate() const {
  if (!std::isfinite(mean_phi0)) throw std::domain_error("background: mean_phi0 must be finite");
  if (!finite_nonneg(var_phi0)) throw std::domain_error("background: var_phi0 must be >= 0");
}

void ProbeChannel::validate() const {
  if (!finite_nonneg(probe_photons)) throw std::domain_error("channel: probe photons must be >= 0");
  if (!finite_nonneg(reference_photons)) {
    throw std::domain_error("channel: reference photons must be >= 0");
  }
  coupling.validate();
  background.validate();
}

CouplingStatistics coupling_from_line(const DispersiveLine& line, double min_ratio) {
  line.validate(min_ratio);
  const double dk = line.c_constant * line.detuning_std / (line.detuning * line.detuning);
  CouplingStatistics coupling{.mean_k = line.c_constant / line.detuning, .var_k = dk * dk};
  coupling.validate();
  return coupling;
}

LoOffset lo_offset(const ProbeChannel& channel, std::int64_t n_atoms, double small_angle_limit) {
  const double offset = channel.background.mean_phi0 +
                        channel.coupling.mean_k * static_cast<double>(n_atoms) / 2.0;
  return LoOffset{.radians = offset, .exceeds_small_angle = std::abs(offset) > small_angle_limit};
}

double single_probe_phase(const ProbeChannel& channel, std::int64_t n_atoms, std::int64_t n_up,
                          RandomStream& rng) {
  const double k = draw_gaussian(channel.coupling.mean_k, channel.coupling.var_k, rng);
  const double phi0 =
      draw_gaussian(channel.background.mean_phi0, channel.background.var_phi0, rng);
  const double offset = lo_offset(channel, n_atoms).radians;
  return (k * static_cast<double>(n_up) + phi0) - offset;
}

DualProbePhases dual_probe_phases(const ProbeChannel& up_channel, std::int64_t n_atoms,
                                  std::int64_t n_up, RandomStream& rng) {
  const double k = draw_gaussian(up_channel.coupling.mean_k, up_channel.coupling.var_k, rng);
  const double phi0 =
      draw_gaussian(up_channel.background.mean_phi0, up_channel.background.var_phi0, rng);
  const double offset = lo_offset(up_channel, n_atoms).radians;
  const auto n_down = n_atoms - n_up;
  return DualProbePhases{
      .up = (k * static_cast<double>(n_up) + phi0) - offset,
      .down = -(k * static_cast<double>(n_down) + phi0) + offset,
  };
}

double single_probe_variance(const ProbeChannel& channel, std::int64_t n_atoms) {
  channel.validate();
  const double n = static_cast<double>(n_atoms);
  const double nr = channel.reference_photons;
  const double np = channel.probe_photons;
  const double k = channel.coupling.mean_k;
  const double vk = channel.coupling.var_k;
  const double vphi = channel.background.var_phi0;
  return nr + np + nr * np * ((k * k + vk * n + vk) * n + 4.0 * vphi);
}

double dual_probe_variance(const ProbeChannel& up_channel, const ProbeChannel& down_channel,
                           std::int64_t n_atoms) {
  check_dual_preconditions(up_channel, down_channel);
  const double n = static_cast<double>(n_atoms);
  const double nr = up_channel.reference_photons;
  const double np = up_channel.probe_photons;
  const double k = up_channel.coupling.mean_k;
  const double vk = up_channel.coupling.var_k;
  return shot_noise(nr, np, down_channel.reference_photons, down_channel.probe_photons) +
         4.0 * nr * np * (k * k + vk) * n;
}

double shot_noise(double n_r, double n_p, double m_r, double m_p) { return n_r + n_p + m_r + m_p; }

ProbeCriterion single_probe_criterion(const ProbeChannel& channel, std::int64_t n_atoms,
                                      double strictness) {
  const double k2 = channel.coupling.mean_k * channel.coupling.mean_k;
  const double vk = channel.coupling.var_k;
  const double n = static_cast<double>(n_atoms);
  double dual_ratio = 0.0;
  if (vk > 0.0) dual_ratio = k2 > 0.0 ? vk / k2 : std::numeric_limits<double>::infinity();
  const double single_ratio = dual_ratio * n;
  return ProbeCriterion{
      .dual_ok = dual_ratio <= strictness,
      .single_ok = single_ratio <= strictness,
      .dual_ratio = dual_ratio,
      .single_ratio = single_ratio,
  };
}

DetectionRecord simulate_single_probe(const ProbeChannel& channel, const EnsembleSpec& spec,
                                      RandomStream& rng) {
  const DickeProjection m = sample_dicke(spec, rng);
  const double phi = single_probe_phase(channel, spec.n_atoms(), m.up_count(spec), rng);
  auto rec = sample_counts(
      FieldPair{.n_probe = channel.probe_photons, .n_reference = channel.reference_photons,
                .phase = phi},
      rng);
  rec.latent_m = m;
  return rec;
}

DetectionRecord simulate_dual_probe(const ProbeChannel& up_channel,
                                    const ProbeChannel& down_channel, const EnsembleSpec& spec,
                                    RandomStream& rng) {
  check_dual_preconditions(up_channel, down_channel);
  const DickeProjection m = sample_dicke(spec, rng);
  const auto phases = dual_probe_phases(up_channel, spec.n_atoms(), m.up_count(spec), rng);
  const auto up = sample_counts(FieldPair{.n_probe = up_channel.probe_photons,
                                          .n_reference = up_channel.reference_photons,
                                          .phase = phases.up},
                                rng);
  const auto down = sample_counts(FieldPair{.n_probe = down_channel.probe_photons,
                                            .n_reference = down_channel.reference_photons,
                                            .phase = phases.down},
                                  rng);
  DetectionRecord rec;
  rec.count_d1 = up.count_d1 + down.count_d1;
  rec.count_d2 = up.count_d2 + down.count_d2;
  rec.difference = rec.count_d2 - rec.count_d1;
  rec.latent_m = m;
  return rec;
}

}  // namespace spinsqueeze
