// SPDX-License-Identifier: Apache-2.0
#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

#include "spinsqueeze/atomic_ensemble.hpp"
#include "spinsqueeze/conditional_update.hpp"
#include "spinsqueeze/config.hpp"
#include "spinsqueeze/experiments.hpp"
#include "spinsqueeze/homodyne.hpp"
#include "spinsqueeze/metrology_optimizer.hpp"
#include "spinsqueeze/probe_schemes.hpp"

namespace py = pybind11;
namespace sq = spinsqueeze;

namespace {

py::dict moments_dict(const sq::CssMoments& m) {
  py::dict d;
  d["mean_m"] = m.mean_m;
  d["var_m"] = m.var_m;
  d["var_population_difference"] = m.var_population_difference;
  d["mean_population_up"] = m.mean_population_up;
  d["var_population_up"] = m.var_population_up;
  return d;
}

std::string run_config_text(const std::string& text, unsigned threads,
                            std::optional<std::uint64_t> seed) {
  const auto parsed = sq::parse_config(text);
  if (!parsed.ok()) {
    std::string msg = "invalid config:";
    for (const auto& i : parsed.issues) msg += "\n  " + i.describe();
    throw std::invalid_argument(msg);
  }
  return sq::run_experiment_to_string(*parsed.config, sq::RunOptions{threads, seed});
}

}  // namespace

PYBIND11_MODULE(_spinsqueeze, m) {
  m.doc() = "Measurement-induced spin squeezing: CSS statistics, homodyne detection, "
            "Bayesian conditioning and the photon-number tradeoff";

  py::register_exception<sq::InvalidOperatingPoint>(m, "InvalidOperatingPoint",
                                                     PyExc_ValueError);

  // Ensemble
  m.def("css_dicke_weight",
        [](std::int64_t n_atoms, double m_value) {
          return sq::css_dicke_weight(sq::EnsembleSpec(n_atoms),
                                      sq::DickeProjection::from_value(m_value));
        },
        py::arg("n_atoms"), py::arg("m"));
  m.def("css_moments", [](std::int64_t n) { return moments_dict(sq::css_moments(sq::EnsembleSpec(n))); },
        py::arg("n_atoms"));
  m.def("sample_dicke",
        [](std::int64_t n_atoms, std::uint64_t seed, std::uint64_t stream) {
          sq::RandomStream rng(seed, stream);
          return sq::sample_dicke(sq::EnsembleSpec(n_atoms), rng).value();
        },
        py::arg("n_atoms"), py::arg("seed"), py::arg("stream") = 0);

  // Homodyne
  m.def("mean_difference",
        [](double n_r, double n_p, double phase) { return sq::mean_difference({n_p, n_r, phase}); },
        py::arg("n_r"), py::arg("n_p"), py::arg("phase"));
  m.def("second_moment_difference",
        [](double n_r, double n_p, double phase) {
          return sq::second_moment_difference({n_p, n_r, phase});
        },
        py::arg("n_r"), py::arg("n_p"), py::arg("phase"));
  m.def("variance_fixed_phase",
        [](double n_r, double n_p, double phase) { return sq::variance_fixed_phase({n_p, n_r, phase}); },
        py::arg("n_r"), py::arg("n_p"), py::arg("phase") = 0.0);
  m.def("variance_fluctuating_phase",
        [](double n_r, double n_p, double phase_variance) {
          const auto v = sq::variance_fluctuating_phase({n_p, n_r, 0.0}, phase_variance);
          return py::make_tuple(v.value, v.linearization_ok);
        },
        py::arg("n_r"), py::arg("n_p"), py::arg("phase_variance"),
        "Returns (variance, linearization_ok).");
  m.def("sample_counts",
        [](double n_r, double n_p, double phase, std::uint64_t seed, std::uint64_t stream) {
          sq::RandomStream rng(seed, stream);
          const auto r = sq::sample_counts({n_p, n_r, phase}, rng);
          return py::make_tuple(r.count_d1, r.count_d2, r.difference);
        },
        py::arg("n_r"), py::arg("n_p"), py::arg("phase"), py::arg("seed"), py::arg("stream") = 0,
        "Returns (count_d1, count_d2, difference) with difference = d2 - d1.");
  m.def("fock_oracle_moments",
        [](std::complex<double> alpha_r, std::complex<double> alpha_p, int dimension) {
          const auto o = sq::fock_oracle_moments(alpha_r, alpha_p, dimension);
          py::dict d;
          d["mean"] = o.mean;
          d["second_moment"] = o.second_moment;
          d["truncation_error"] = o.truncation_error;
          return d;
        },
        py::arg("alpha_reference"), py::arg("alpha_probe"), py::arg("dimension") = 60);

  // Probe schemes
  py::class_<sq::CouplingStatistics>(m, "CouplingStatistics")
      .def(py::init<double, double>(), py::arg("mean_k") = 0.0, py::arg("var_k") = 0.0)
      .def_readwrite("mean_k", &sq::CouplingStatistics::mean_k)
      .def_readwrite("var_k", &sq::CouplingStatistics::var_k);
  py::class_<sq::ProbeChannel>(m, "ProbeChannel")
      .def(py::init([](double probe, double reference, double mean_k, double var_k,
                       double mean_phi0, double var_phi0) {
             return sq::ProbeChannel{probe, reference, {mean_k, var_k}, {mean_phi0, var_phi0}};
           }),
           py::arg("probe_photons"), py::arg("reference_photons"), py::arg("mean_k"),
           py::arg("var_k") = 0.0, py::arg("mean_phi0") = 0.0, py::arg("var_phi0") = 0.0)
      .def_readwrite("probe_photons", &sq::ProbeChannel::probe_photons)
      .def_readwrite("reference_photons", &sq::ProbeChannel::reference_photons)
      .def_readwrite("coupling", &sq::ProbeChannel::coupling);
  m.def("coupling_from_line",
        [](double c, double detuning, double linewidth, double detuning_std) {
          return sq::coupling_from_line({c, detuning, linewidth, detuning_std});
        },
        py::arg("c_constant"), py::arg("detuning"), py::arg("linewidth"),
        py::arg("detuning_std") = 0.0);
  m.def("single_probe_variance", &sq::single_probe_variance, py::arg("channel"),
        py::arg("n_atoms"));
  m.def("dual_probe_variance", &sq::dual_probe_variance, py::arg("up_channel"),
        py::arg("down_channel"), py::arg("n_atoms"));
  m.def("shot_noise", &sq::shot_noise, py::arg("n_r"), py::arg("n_p"), py::arg("m_r"),
        py::arg("m_p"));
  m.def("single_probe_criterion",
        [](const sq::ProbeChannel& ch, std::int64_t n, double strictness) {
          const auto c = sq::single_probe_criterion(ch, n, strictness);
          py::dict d;
          d["dual_ok"] = c.dual_ok;
          d["single_ok"] = c.single_ok;
          d["dual_ratio"] = c.dual_ratio;
          d["single_ratio"] = c.single_ratio;
          return d;
        },
        py::arg("channel"), py::arg("n_atoms"), py::arg("strictness") = 0.01);

  // Conditional update
  py::class_<sq::MeasurementGain>(m, "MeasurementGain")
      .def(py::init<double, double>(), py::arg("g"), py::arg("n_sn"))
      .def_readwrite("g", &sq::MeasurementGain::g)
      .def_readwrite("n_sn", &sq::MeasurementGain::n_sn)
      .def_static("from_dual_probe", &sq::MeasurementGain::from_dual_probe);
  py::class_<sq::PosteriorState>(m, "PosteriorState")
      .def_readonly("mean_m", &sq::PosteriorState::mean_m)
      .def_readonly("var_m", &sq::PosteriorState::var_m)
      .def_readonly("kappa_squared", &sq::PosteriorState::kappa_squared)
      .def_readonly("gaussian_prior_ok", &sq::PosteriorState::gaussian_prior_ok);
  m.def("kappa_squared",
        [](const sq::MeasurementGain& g, std::int64_t n) { return sq::kappa_squared(g, n); },
        py::arg("gain"), py::arg("n_atoms"));
  m.def("kappa_squared_strong_lo", &sq::kappa_squared_strong_lo, py::arg("mean_k"),
        py::arg("n_atoms"), py::arg("n_probe"));
  m.def("posterior",
        [](double n, std::int64_t n_atoms, const sq::MeasurementGain& g) {
          return sq::posterior(n, sq::EnsembleSpec(n_atoms), g);
        },
        py::arg("outcome"), py::arg("n_atoms"), py::arg("gain"));
  m.def("exact_discrete_posterior",
        [](double n, std::int64_t n_atoms, const sq::MeasurementGain& g) {
          const auto p = sq::exact_discrete_posterior(n, sq::EnsembleSpec(n_atoms), g);
          py::dict d;
          d["m"] = p.m_values;
          d["weights"] = p.weights;
          d["mean"] = p.mean;
          d["variance"] = p.variance;
          return d;
        },
        py::arg("outcome"), py::arg("n_atoms"), py::arg("gain"));
  m.def("conditional_experiment",
        [](std::int64_t n_atoms, const sq::MeasurementGain& g, std::int64_t trials,
           std::uint64_t seed, unsigned threads) {
          sq::ConditionalExperimentResult r;
          {
            py::gil_scoped_release release;
            r = sq::conditional_experiment(sq::EnsembleSpec(n_atoms), g, trials, seed, threads);
          }
          py::dict d;
          d["kappa_squared"] = r.kappa_squared;
          d["prior_var_estimate"] = r.prior_var_estimate;
          d["conditional_var_estimate"] = r.conditional_var_estimate;
          d["conditional_var_se"] = r.conditional_var_se;
          d["conditional_var_latent"] = r.conditional_var_latent;
          d["posterior_mean_var"] = r.posterior_mean_var;
          d["predicted_conditional_var"] = r.predicted_conditional_var;
          return d;
        },
        py::arg("n_atoms"), py::arg("gain"), py::arg("trials"), py::arg("seed"),
        py::arg("threads") = 1);

  // Metrology
  py::class_<sq::SqueezingReport>(m, "SqueezingReport")
      .def_readonly("kappa_squared", &sq::SqueezingReport::kappa_squared)
      .def_readonly("eta", &sq::SqueezingReport::eta)
      .def_readonly("metrological_ratio", &sq::SqueezingReport::metrological_ratio)
      .def_readonly("squeezing_db", &sq::SqueezingReport::squeezing_db)
      .def_readonly("criterion_met", &sq::SqueezingReport::criterion_met);
  py::class_<sq::PhotonOptimum>(m, "PhotonOptimum")
      .def_readonly("improves", &sq::PhotonOptimum::improves)
      .def_readonly("n_p_star", &sq::PhotonOptimum::n_p_star)
      .def_readonly("eta_star", &sq::PhotonOptimum::eta_star)
      .def_readonly("kappa_sq_star", &sq::PhotonOptimum::kappa_sq_star)
      .def_readonly("best_report", &sq::PhotonOptimum::best_report)
      .def_readonly("numeric_n_p", &sq::PhotonOptimum::numeric_n_p);
  m.def("eta",
        [](double gamma, double detuning, double mean_k, double n_probe) {
          return sq::eta({gamma, detuning, mean_k, n_probe});
        },
        py::arg("gamma"), py::arg("detuning"), py::arg("mean_k"), py::arg("n_probe"));
  m.def("scattered_photons",
        [](double gamma, double detuning, double mean_k, double n_probe, std::int64_t n) {
          return sq::scattered_photons({gamma, detuning, mean_k, n_probe}, n);
        },
        py::arg("gamma"), py::arg("detuning"), py::arg("mean_k"), py::arg("n_probe"),
        py::arg("n_atoms"));
  m.def("evaluate_point",
        [](double kappa_sq, double eta_value) { return sq::evaluate_point(kappa_sq, eta_value); },
        py::arg("kappa_squared"), py::arg("eta"));
  m.def("optimize_photon_number", &sq::optimize_photon_number, py::arg("kappa_per_photon"),
        py::arg("eta_per_photon"));
  m.def("detuning_invariance_check",
        [](double c, double gamma, std::int64_t n_atoms, double d1, double d2) {
          const auto r = sq::detuning_invariance_check(
              sq::ProbeTradeoffInputs{.c_constant = c, .gamma = gamma, .detuning = d1,
                                      .n_atoms = n_atoms},
              d1, d2);
          py::dict d;
          d["n_p_ratio"] = r.n_p_ratio;
          d["expected_n_p_ratio"] = r.expected_n_p_ratio;
          d["xi_squared_rel_diff"] = r.xi_squared_rel_diff;
          d["invariant"] = r.invariant;
          d["optimum_1"] = r.optimum_1;
          d["optimum_2"] = r.optimum_2;
          return d;
        },
        py::arg("c_constant"), py::arg("gamma"), py::arg("n_atoms"), py::arg("detuning_1"),
        py::arg("detuning_2"));

  // Harness
  m.def("validate_config",
        [](const std::string& text) {
          std::vector<std::string> out;
          for (const auto& i : sq::parse_config(text).issues) out.push_back(i.describe());
          return out;
        },
        py::arg("text"), "Returns the list of problems; empty when the config is valid.");
  m.def("run_config", &run_config_text, py::arg("text"), py::arg("threads") = 1,
        py::arg("seed") = std::nullopt, py::call_guard<py::gil_scoped_release>(),
        "Runs a config given as key=value text and returns the CSV document.");
  m.attr("__version__") = std::string(sq::kVersion);
}
