// SPDX-License-Identifier: Apache-2.0
#include "spinsqueeze/metrology_optimizer.hpp"

#include <cmath>
#include <sstream>

#include "spinsqueeze/golden_section.hpp"

namespace spinsqueeze {

namespace {

// Search window for the numeric optimizer, as fractions of 1/B.
constexpr double kSearchLowFraction = 1e-12;
constexpr double kSearchHighFraction = 1.0 - 1e-12;

void require_positive_rate(double eta_per_photon) {
  if (!std::isfinite(eta_per_photon) || eta_per_photon <= 0.0) {
    throw std::domain_error("photon optimizer: eta per photon must be > 0");
  }
}

}  // namespace

void DecoherenceModel::validate() const {
  if (!std::isfinite(gamma) || gamma <= 0.0) {
    throw std::domain_error("DecoherenceModel: gamma must be > 0");
  }
  if (!std::isfinite(detuning) || detuning == 0.0) {
    throw std::domain_error("DecoherenceModel: detuning must be non-zero");
  }
  if (!std::isfinite(mean_k) || mean_k < 0.0) {
    throw std::domain_error("DecoherenceModel: mean_k must be >= 0");
  }
  if (!std::isfinite(n_probe) || n_probe < 0.0) {
    throw std::domain_error("DecoherenceModel: n_probe must be >= 0");
  }
}

double DecoherenceModel::eta_per_photon() const {
  validate();
  return gamma * mean_k / std::abs(detuning);
}

double eta(const DecoherenceModel& model) {
  const double value = model.eta_per_photon() * model.n_probe;
  if (value >= 1.0) {
    std::ostringstream msg;
    msg << "eta = " << value << " >= 1 at n_p = " << model.n_probe
        << ": every atom scatters; invalid operating point";
    throw InvalidOperatingPoint(msg.str());
  }
  return value;
}

double scattered_photons(const DecoherenceModel& model, std::int64_t n_atoms) {
  return model.n_probe * model.eta_per_photon() * static_cast<double>(n_atoms);
}

SqueezingReport evaluate_point(double kappa_squared, double eta_value) {
  if (!(eta_value >= 0.0) || eta_value >= 1.0) {
    std::ostringstream msg;
    msg << "eta = " << eta_value << " outside [0, 1); invalid operating point";
    throw InvalidOperatingPoint(msg.str());
  }
  if (!(kappa_squared >= 0.0)) throw std::domain_error("evaluate_point: kappa^2 must be >= 0");
  const double contraction = (1.0 - eta_value) * (1.0 - eta_value);
  const double ratio = 1.0 / ((1.0 + kappa_squared) * contraction);
  return SqueezingReport{
      .kappa_squared = kappa_squared,
      .eta = eta_value,
      .metrological_ratio = ratio,
      .squeezing_db = -10.0 * std::log10(ratio),
      .criterion_met = ratio < 1.0,
  };
}

SqueezingReport evaluate_point(double kappa_squared, const DecoherenceModel& model) {
  return evaluate_point(kappa_squared, eta(model));
}

double PhotonTradeoff::xi_squared(double n_probe) const {
  const double shrink = 1.0 - eta_per_photon * n_probe;
  return 1.0 / ((1.0 + kappa_per_photon * n_probe) * shrink * shrink);
}

SqueezingReport PhotonTradeoff::report(double n_probe) const {
  return evaluate_point(kappa_per_photon * n_probe, eta_per_photon * n_probe);
}

PhotonOptimum optimize_photon_number_numeric(const std::function<double(double)>& kappa_of_np,
                                             double eta_per_photon) {
  require_positive_rate(eta_per_photon);
  const double b = eta_per_photon;
  auto log_xi2 = [&](double log_np) {
    const double np = std::exp(log_np);
    return -std::log1p(kappa_of_np(np)) - 2.0 * std::log1p(-b * np);
  };
  const auto found = golden_section_minimize(log_xi2, std::log(kSearchLowFraction / b),
                                             std::log(kSearchHighFraction / b));
  PhotonOptimum out;
  out.numeric_n_p = std::exp(found.x);
  out.numeric_xi_squared = std::exp(found.fx);
  const auto best = evaluate_point(kappa_of_np(out.numeric_n_p), b * out.numeric_n_p);
  out.improves = best.metrological_ratio < 1.0;
  out.n_p_star = out.improves ? out.numeric_n_p : 0.0;
  out.best_report = out.improves ? best : evaluate_point(kappa_of_np(0.0), 0.0);
  out.eta_star = out.best_report.eta;
  out.kappa_sq_star = out.best_report.kappa_squared;
  return out;
}

PhotonOptimum optimize_photon_number(double kappa_per_photon, double eta_per_photon) {
  require_positive_rate(eta_per_photon);
  if (!std::isfinite(kappa_per_photon) || kappa_per_photon < 0.0) {
    throw std::domain_error("photon optimizer: kappa^2 per photon must be >= 0");
  }
  const double a = kappa_per_photon;
  const double b = eta_per_photon;
  PhotonOptimum out = optimize_photon_number_numeric([a](double np) { return a * np; }, b);
  const PhotonTradeoff tradeoff{a, b};
  if (a > 2.0 * b) {
    out.improves = true;
    out.n_p_star = (a - 2.0 * b) / (3.0 * a * b);
    out.best_report = tradeoff.report(out.n_p_star);
  } else {
    out.improves = false;
    out.n_p_star = 0.0;
    out.best_report = tradeoff.report(0.0);
  }
  out.eta_star = out.best_report.eta;
  out.kappa_sq_star = out.best_report.kappa_squared;
  return out;
}

PhotonTradeoff ProbeTradeoffInputs::strong_lo_tradeoff() const {
  const double k = mean_k();
  return PhotonTradeoff{
      .kappa_per_photon = 2.0 * k * k * static_cast<double>(n_atoms),
      .eta_per_photon = gamma * std::abs(k) / std::abs(detuning),
  };
}

double ProbeTradeoffInputs::kappa_squared(double n_probe, KappaForm form) const {
  const double k = mean_k();
  const double n = static_cast<double>(n_atoms);
  if (form == KappaForm::StrongLocalOscillator) return 2.0 * k * k * n * n_probe;
  // 4 n_r n_p k^2 N / (n_r + n_p + m_r + m_p) with m_r = n_r, m_p = n_p.
  const double denom = 2.0 * (n_reference + n_probe);
  return denom > 0.0 ? 4.0 * n_reference * n_probe * k * k * n / denom : 0.0;
}

PhotonOptimum optimize_probe(const ProbeTradeoffInputs& inputs, KappaForm form) {
  const auto tradeoff = inputs.strong_lo_tradeoff();
  if (form == KappaForm::StrongLocalOscillator) {
    return optimize_photon_number(tradeoff.kappa_per_photon, tradeoff.eta_per_photon);
  }
  if (!(inputs.n_reference > 0.0)) {
    throw std::domain_error("optimize_probe: exact kappa^2 needs n_reference > 0");
  }
  return optimize_photon_number_numeric(
      [&inputs](double np) { return inputs.kappa_squared(np, KappaForm::Exact); },
      tradeoff.eta_per_photon);
}

std::vector<NoiseBudgetPoint> noise_budget_sweep(const PhotonTradeoff& tradeoff,
                                                 std::int64_t n_atoms,
                                                 std::span<const double> photon_numbers) {
  const double projection = static_cast<double>(n_atoms) / 4.0;
  std::vector<NoiseBudgetPoint> rows;
  rows.reserve(photon_numbers.size());
  for (double np : photon_numbers) {
    if (tradeoff.eta_per_photon * np >= 1.0) continue;
    NoiseBudgetPoint p;
    p.n_probe = np;
    p.report = tradeoff.report(np);
    p.projection_var = projection;
    p.conditional_var = projection / (1.0 + p.report.kappa_squared);
    p.benchmark_var = (1.0 - p.report.eta) * (1.0 - p.report.eta) * projection;
    rows.push_back(p);
  }
  return rows;
}

DetuningInvarianceReport detuning_invariance_check(const ProbeTradeoffInputs& base,
                                                   double detuning_1, double detuning_2,
                                                   double min_ratio) {
  for (double d : {detuning_1, detuning_2}) {
    if (!std::isfinite(d) || std::abs(d) < min_ratio * base.gamma) {
      std::ostringstream msg;
      msg << "detuning " << d << " violates |detuning| >= " << min_ratio << " x gamma";
      throw std::domain_error(msg.str());
    }
  }
  auto at = [&](double d) {
    ProbeTradeoffInputs p = base;
    p.detuning = d;
    return optimize_probe(p);
  };
  DetuningInvarianceReport r;
  r.detuning_1 = detuning_1;
  r.detuning_2 = detuning_2;
  r.optimum_1 = at(detuning_1);
  r.optimum_2 = at(detuning_2);
  r.n_p_ratio = r.optimum_1.n_p_star > 0.0 ? r.optimum_2.n_p_star / r.optimum_1.n_p_star : 0.0;
  r.expected_n_p_ratio = (detuning_2 / detuning_1) * (detuning_2 / detuning_1);
  const double x1 = r.optimum_1.best_report.metrological_ratio;
  const double x2 = r.optimum_2.best_report.metrological_ratio;
  r.xi_squared_rel_diff = std::abs(x2 - x1) / std::abs(x1);
  r.invariant = r.xi_squared_rel_diff <= 1e-10 &&
                std::abs(r.n_p_ratio - r.expected_n_p_ratio) <= 1e-12 * r.expected_n_p_ratio;
  return r;
}

}  // namespace spinsqueeze
