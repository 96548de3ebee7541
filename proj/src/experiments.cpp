// SPDX-License-Identifier: Apache-2.0
#include "spinsqueeze/experiments.hpp"

#include <fmt/format.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "spinsqueeze/atomic_ensemble.hpp"
#include "spinsqueeze/conditional_update.hpp"
#include "spinsqueeze/homodyne.hpp"
#include "spinsqueeze/metrology_optimizer.hpp"
#include "spinsqueeze/parallel.hpp"
#include "spinsqueeze/probe_schemes.hpp"
#include "spinsqueeze/rng.hpp"
#include "spinsqueeze/statistics.hpp"

namespace spinsqueeze {

namespace {

constexpr std::string_view kVersionKey = "spinsqueeze_version";
constexpr std::string_view kRngKey = "rng_algorithm";

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

// Negative zero prints as "-0"; emit a plain 0.
std::string cell(double x) { return fmt::format("{}", x == 0.0 ? 0.0 : x); }
std::string cell(std::int64_t x) { return fmt::format("{}", x); }
std::string cell(bool x) { return x ? "true" : "false"; }
std::string cell(std::string_view x) { return std::string(x); }

struct Context {
  std::uint64_t seed;
  unsigned threads;
  std::uint32_t substream;
};

// Runs `draw` once per trial on its own substream and returns the samples in
// trial order.
template <class Draw>
std::vector<double> monte_carlo(std::int64_t trials, const Context& ctx, Draw draw) {
  std::vector<double> samples(static_cast<std::size_t>(trials));
  parallel_for(trials, ctx.threads, [&](std::int64_t i) {
    RandomStream rng(ctx.seed, static_cast<std::uint64_t>(i), ctx.substream);
    samples[static_cast<std::size_t>(i)] = draw(rng);
  });
  return samples;
}

CouplingStatistics resolve_coupling(const ExperimentConfig& c) {
  if (c.mean_k) return CouplingStatistics{*c.mean_k, c.var_k.value_or(0.0)};
  const DispersiveLine line{
      .c_constant = *c.c_constant,
      .detuning = *c.detuning,
      .linewidth = c.linewidth ? *c.linewidth : *c.gamma,
      .detuning_std = c.detuning_std.value_or(0.0),
  };
  return coupling_from_line(line);
}

double resolve_gamma(const ExperimentConfig& c) { return c.gamma ? *c.gamma : *c.linewidth; }

BackgroundPhase resolve_background(const ExperimentConfig& c) {
  return BackgroundPhase{c.mean_phi0.value_or(0.0), c.var_phi0.value_or(0.0)};
}

ProbeChannel up_channel(const ExperimentConfig& c) {
  return ProbeChannel{*c.n_p, *c.n_r, resolve_coupling(c), resolve_background(c)};
}

ProbeChannel down_channel(const ExperimentConfig& c) {
  return ProbeChannel{*c.m_p, *c.m_r, resolve_coupling(c), resolve_background(c)};
}

Table projection_noise(const ExperimentConfig& c, const Context& ctx) {
  const EnsembleSpec spec(*c.n_atoms);
  const auto samples =
      monte_carlo(*c.trials, ctx, [&](RandomStream& rng) { return sample_dicke(spec, rng).value(); });
  const double analytic = css_moments(spec).var_m;
  Table t{{"trial_batch", "trials", "empirical_var", "analytic_var", "ratio"}, {}};
  const std::int64_t batches = std::min<std::int64_t>(10, *c.trials);
  for (std::int64_t b = 1; b <= batches; ++b) {
    const std::int64_t upto = *c.trials * b / batches;
    const auto m = sample_moments(std::span(samples).first(static_cast<std::size_t>(upto)));
    t.add({cell(b), cell(upto), cell(m.variance), cell(analytic), cell(m.variance / analytic)});
  }
  return t;
}

Table homodyne_check(const ExperimentConfig& c, const Context& ctx) {
  const FieldPair fields{*c.n_p, *c.n_r, c.mean_phi0.value_or(0.0)};
  const double phase_var = c.var_phi0.value_or(0.0);
  const auto samples = monte_carlo(*c.trials, ctx, [&](RandomStream& rng) {
    FieldPair f = fields;
    if (phase_var > 0.0) {
      std::normal_distribution<double> jitter(f.phase, std::sqrt(phase_var));
      f.phase = jitter(rng);
    }
    return static_cast<double>(sample_counts(f, rng).difference);
  });
  const auto m = sample_moments(samples);
  double analytic_mean = mean_difference(fields);
  double analytic_var = variance_fixed_phase(fields);
  bool linear_ok = true;
  if (phase_var > 0.0) {
    // E[sin phi] for Gaussian phi about zero vanishes.
    analytic_mean = 0.0;
    const auto v = variance_fluctuating_phase(fields, phase_var);
    analytic_var = v.value;
    linear_ok = v.linearization_ok;
  }
  const double mean_se = m.mean_standard_error();
  const double var_se = m.variance_standard_error();
  Table t{{"n_r", "n_p", "phase", "phase_variance", "trials", "empirical_mean", "analytic_mean",
           "mean_se", "mean_z", "empirical_var", "analytic_var", "var_se", "var_rel_err",
           "linearization_ok"},
          {}};
  t.add({cell(fields.n_reference), cell(fields.n_probe), cell(fields.phase), cell(phase_var),
         cell(*c.trials), cell(m.mean), cell(analytic_mean), cell(mean_se),
         cell(mean_se > 0 ? (m.mean - analytic_mean) / mean_se : 0.0), cell(m.variance),
         cell(analytic_var), cell(var_se),
         cell(analytic_var > 0 ? (m.variance - analytic_var) / analytic_var : 0.0),
         cell(linear_ok)});
  return t;
}

Table single_probe(const ExperimentConfig& c, const Context& ctx) {
  const EnsembleSpec spec(*c.n_atoms);
  const ProbeChannel channel = up_channel(c);
  const auto samples = monte_carlo(*c.trials, ctx, [&](RandomStream& rng) {
    return static_cast<double>(simulate_single_probe(channel, spec, rng).difference);
  });
  const auto m = sample_moments(samples);
  const double analytic = single_probe_variance(channel, spec.n_atoms());
  const double n = static_cast<double>(spec.n_atoms());
  const double nrnp = channel.reference_photons * channel.probe_photons;
  const double k = channel.coupling.mean_k;
  const double vk = channel.coupling.var_k;
  const auto criterion = single_probe_criterion(channel, spec.n_atoms());
  const double se = m.variance_standard_error();
  Table t{{"n_atoms", "trials", "empirical_mean", "mean_se", "empirical_var", "analytic_var",
           "var_se", "var_z", "shot_noise_term", "projection_term", "coupling_noise_term",
           "background_term", "lo_offset", "single_ok", "dual_ok"},
          {}};
  t.add({cell(spec.n_atoms()), cell(*c.trials), cell(m.mean), cell(m.mean_standard_error()),
         cell(m.variance), cell(analytic), cell(se),
         cell(se > 0 ? (m.variance - analytic) / se : 0.0),
         cell(channel.reference_photons + channel.probe_photons), cell(nrnp * k * k * n),
         cell(nrnp * vk * (n + 1.0) * n), cell(4.0 * nrnp * channel.background.var_phi0),
         cell(lo_offset(channel, spec.n_atoms()).radians), cell(criterion.single_ok),
         cell(criterion.dual_ok)});
  return t;
}

Table dual_probe(const ExperimentConfig& c, const Context& ctx) {
  const EnsembleSpec spec(*c.n_atoms);
  const ProbeChannel up = up_channel(c);
  const ProbeChannel down = down_channel(c);
  const auto samples = monte_carlo(*c.trials, ctx, [&](RandomStream& rng) {
    return static_cast<double>(simulate_dual_probe(up, down, spec, rng).difference);
  });
  const auto m = sample_moments(samples);
  const double analytic = dual_probe_variance(up, down, spec.n_atoms());
  const double n = static_cast<double>(spec.n_atoms());
  const double nrnp = up.reference_photons * up.probe_photons;
  const double k = up.coupling.mean_k;
  const double se = m.variance_standard_error();
  Table t{{"n_atoms", "trials", "empirical_mean", "mean_se", "empirical_var", "analytic_var",
           "var_se", "var_z", "shot_noise_term", "projection_term", "coupling_noise_term"},
          {}};
  t.add({cell(spec.n_atoms()), cell(*c.trials), cell(m.mean), cell(m.mean_standard_error()),
         cell(m.variance), cell(analytic), cell(se),
         cell(se > 0 ? (m.variance - analytic) / se : 0.0),
         cell(shot_noise(up.reference_photons, up.probe_photons, down.reference_photons,
                         down.probe_photons)),
         cell(4.0 * nrnp * k * k * n), cell(4.0 * nrnp * up.coupling.var_k * n)});
  return t;
}

Table conditional(const ExperimentConfig& c, const Context& ctx) {
  const EnsembleSpec spec(*c.n_atoms);
  const auto gain = MeasurementGain::from_dual_probe(up_channel(c), down_channel(c));
  const auto r = conditional_experiment(spec, gain, *c.trials, ctx.seed, ctx.threads,
                                        ctx.substream);
  const double projection = static_cast<double>(spec.n_atoms()) / 4.0;
  const double posterior_var = projection / (1.0 + r.kappa_squared);
  Table t{{"n_atoms", "g", "n_sn", "kappa_sq", "trials", "prior_var_estimate",
           "conditional_var_estimate", "conditional_var_se", "conditional_var_latent",
           "predicted_conditional_var", "reduction_ratio", "predicted_reduction",
           "posterior_var", "posterior_mean_var", "total_variance", "projection_var"},
          {}};
  t.add({cell(spec.n_atoms()), cell(gain.g), cell(gain.n_sn), cell(r.kappa_squared),
         cell(r.trials), cell(r.prior_var_estimate), cell(r.conditional_var_estimate),
         cell(r.conditional_var_se), cell(r.conditional_var_latent),
         cell(r.predicted_conditional_var),
         cell(r.prior_var_estimate / r.conditional_var_estimate), cell(1.0 + r.kappa_squared),
         cell(posterior_var), cell(r.posterior_mean_var), cell(posterior_var + r.posterior_mean_var),
         cell(projection)});
  return t;
}

std::vector<std::string> optimize_columns() {
  return {"row_kind", "n_p", "kappa_sq", "eta", "xi2", "squeezing_db", "criterion_met",
          "projection_var", "conditional_var", "benchmark_var"};
}

std::vector<std::string> optimize_row(std::string_view kind, const NoiseBudgetPoint& p) {
  return {cell(kind),
          cell(p.n_probe),
          cell(p.report.kappa_squared),
          cell(p.report.eta),
          cell(p.report.metrological_ratio),
          cell(p.report.squeezing_db),
          cell(p.report.criterion_met),
          cell(p.projection_var),
          cell(p.conditional_var),
          cell(p.benchmark_var)};
}

PhotonTradeoff resolve_tradeoff(const ExperimentConfig& c) {
  const double k = resolve_coupling(c).mean_k;
  const DecoherenceModel model{resolve_gamma(c), *c.detuning, k, 0.0};
  return PhotonTradeoff{kappa_squared_strong_lo(k, *c.n_atoms, 1.0), model.eta_per_photon()};
}

// Handles an n_p sweep itself so the optimum row is emitted once.
Table optimize(const ExperimentConfig& c, const Context&) {
  const auto tradeoff = resolve_tradeoff(c);
  std::vector<double> photon_numbers;
  if (c.sweep && c.sweep->param == "n_p") {
    photon_numbers = c.sweep->values();
  } else if (c.n_p) {
    photon_numbers.push_back(*c.n_p);
  }
  Table t{optimize_columns(), {}};
  for (const auto& p : noise_budget_sweep(tradeoff, *c.n_atoms, photon_numbers)) {
    t.add(optimize_row("point", p));
  }
  const auto best = optimize_photon_number(tradeoff.kappa_per_photon, tradeoff.eta_per_photon);
  const std::array<double, 2> optima{best.n_p_star, best.numeric_n_p};
  const auto rows = noise_budget_sweep(tradeoff, *c.n_atoms, optima);
  t.add(optimize_row("optimum", rows.at(0)));
  t.add(optimize_row("numeric-optimum", rows.at(1)));
  return t;
}

Table detuning_invariance(const ExperimentConfig& c, const Context&) {
  const ProbeTradeoffInputs base{.c_constant = *c.c_constant,
                                 .gamma = resolve_gamma(c),
                                 .detuning = *c.detuning,
                                 .n_atoms = *c.n_atoms};
  std::vector<double> others;
  if (c.sweep && c.sweep->param == "detuning") {
    others = c.sweep->values();
  } else {
    others = {*c.detuning, 2.0 * *c.detuning, 10.0 * *c.detuning};
  }
  Table t{{"detuning", "mean_k", "kappa_per_photon", "eta_per_photon", "n_p_star", "eta_star",
           "kappa_sq_star", "xi2", "squeezing_db", "n_p_ratio", "expected_n_p_ratio",
           "xi2_rel_diff", "invariant"},
          {}};
  for (double d : others) {
    const auto r = detuning_invariance_check(base, *c.detuning, d);
    ProbeTradeoffInputs at = base;
    at.detuning = d;
    const auto tr = at.strong_lo_tradeoff();
    const auto& o = r.optimum_2;
    t.add({cell(d), cell(at.mean_k()), cell(tr.kappa_per_photon), cell(tr.eta_per_photon),
           cell(o.n_p_star), cell(o.eta_star), cell(o.kappa_sq_star),
           cell(o.best_report.metrological_ratio), cell(o.best_report.squeezing_db),
           cell(r.n_p_ratio), cell(r.expected_n_p_ratio), cell(r.xi_squared_rel_diff),
           cell(r.invariant)});
  }
  return t;
}

Table oracle_check(const ExperimentConfig&, const Context&) {
  constexpr int kDimension = 60;
  const std::array<double, 5> photon_grid{0.0, 0.5, 1.0, 2.0, 4.0};
  const double pi = std::numbers::pi;
  const std::array<double, 6> phases{0.0, pi / 6, -pi / 6, pi / 4, -pi / 4, pi / 2};
  Table t{{"n_r", "n_p", "phi", "closed_mean", "oracle_mean", "mean_abs_err", "closed_m2",
           "oracle_m2", "m2_abs_err", "truncation_error"},
          {}};
  for (double nr : photon_grid) {
    for (double np : photon_grid) {
      for (double phi : phases) {
        const FieldPair f{np, nr, phi};
        const auto o = fock_oracle_moments(std::complex<double>(std::sqrt(nr), 0.0),
                                           std::polar(std::sqrt(np), phi), kDimension);
        const double mean = mean_difference(f);
        const double m2 = second_moment_difference(f);
        t.add({cell(nr), cell(np), cell(phi), cell(mean), cell(o.mean),
               cell(std::abs(mean - o.mean)), cell(m2), cell(o.second_moment),
               cell(std::abs(m2 - o.second_moment)), cell(o.truncation_error)});
      }
    }
  }
  return t;
}

Table dispatch(const ExperimentConfig& c, const Context& ctx) {
  switch (c.experiment) {
    case ExperimentKind::ProjectionNoise: return projection_noise(c, ctx);
    case ExperimentKind::HomodyneCheck: return homodyne_check(c, ctx);
    case ExperimentKind::SingleProbe: return single_probe(c, ctx);
    case ExperimentKind::DualProbe: return dual_probe(c, ctx);
    case ExperimentKind::Conditional: return conditional(c, ctx);
    case ExperimentKind::Optimize: return optimize(c, ctx);
    case ExperimentKind::DetuningInvariance: return detuning_invariance(c, ctx);
    case ExperimentKind::OracleCheck: return oracle_check(c, ctx);
  }
  throw std::logic_error("unhandled experiment kind");
}

bool sweep_is_internal(const ExperimentConfig& c) {
  if (!c.sweep) return false;
  return (c.experiment == ExperimentKind::Optimize && c.sweep->param == "n_p") ||
         (c.experiment == ExperimentKind::DetuningInvariance && c.sweep->param == "detuning");
}

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out << ',';
    out << cells[i];
  }
  out << '\n';
}

}  // namespace

void run_experiment(const ExperimentConfig& config, std::ostream& out, const RunOptions& options) {
  ExperimentConfig effective = config;
  if (options.seed_override) effective.seed = options.seed_override;
  if (!effective.seed) effective.seed = 0;
  if (const auto issues = validate_config(effective); !issues.empty()) {
    std::string msg = "invalid config:";
    for (const auto& i : issues) msg += "\n  " + i.describe();
    throw std::invalid_argument(msg);
  }

  out << "# " << kVersionKey << '=' << kVersion << '\n';
  out << "# " << kRngKey << '=' << kRngAlgorithm << '\n';
  for (const auto& line : serialize_config(effective)) out << "# " << line << '\n';
  out.flush();

  const Context base{*effective.seed, std::max(1u, options.threads), 0};
  if (!effective.sweep || sweep_is_internal(effective)) {
    Table t;
    try {
      t = dispatch(effective, base);
    } catch (const std::exception& e) {
      throw RunFailure(fmt::format("{} failed: {}", to_string(effective.experiment), e.what()));
    }
    write_row(out, t.columns);
    for (const auto& r : t.rows) write_row(out, r);
    out.flush();
    return;
  }

  const auto& sweep = *effective.sweep;
  const auto values = sweep.values();
  bool header_written = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto point = with_parameter(effective, sweep.param, values[i]);
    Context ctx = base;
    ctx.substream = static_cast<std::uint32_t>(i);
    Table t;
    try {
      t = dispatch(point, ctx);
    } catch (const std::exception& e) {
      out.flush();
      throw RunFailure(fmt::format("sweep point {} ({}={}) failed: {}", i, sweep.param,
                                   values[i], e.what()));
    }
    if (!header_written) {
      std::vector<std::string> header{sweep.param};
      header.insert(header.end(), t.columns.begin(), t.columns.end());
      write_row(out, header);
      header_written = true;
    }
    for (auto& r : t.rows) {
      r.insert(r.begin(), cell(values[i]));
      write_row(out, r);
    }
    out.flush();
  }
}

std::string run_experiment_to_string(const ExperimentConfig& config, const RunOptions& options) {
  std::ostringstream out;
  run_experiment(config, out, options);
  return out.str();
}

std::string data_section(std::string_view csv) {
  std::size_t pos = 0;
  while (pos < csv.size() && csv[pos] == '#') {
    const auto nl = csv.find('\n', pos);
    if (nl == std::string_view::npos) return {};
    pos = nl + 1;
  }
  return std::string(csv.substr(pos));
}

ParseResult config_from_metadata(std::string_view csv) {
  std::string text;
  std::size_t pos = 0;
  while (pos < csv.size() && csv[pos] == '#') {
    const auto nl = csv.find('\n', pos);
    const auto line = csv.substr(pos, nl == std::string_view::npos ? csv.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? csv.size() : nl + 1;
    auto body = line.substr(1);
    if (!body.empty() && body.front() == ' ') body.remove_prefix(1);
    if (body.starts_with(kVersionKey) || body.starts_with(kRngKey)) continue;
    text.append(body);
    text.push_back('\n');
  }
  return parse_config(text);
}

}  // namespace spinsqueeze
