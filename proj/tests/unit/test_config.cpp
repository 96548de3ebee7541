// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "spinsqueeze/config.hpp"

using namespace spinsqueeze;

namespace {

bool has_issue(const ParseResult& r, std::string_view key, int line = -1,
               std::string_view fragment = {}) {
  return std::any_of(r.issues.begin(), r.issues.end(), [&](const ConfigIssue& i) {
    return i.key == key && (line < 0 || i.line == line) &&
           i.message.find(fragment) != std::string::npos;
  });
}

std::string join(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

}  // namespace

TEST_CASE("minimal projection-noise config") {
  const auto r = parse_config("experiment=projection-noise\nn_atoms=400\ntrials=100000\nseed=1");
  REQUIRE(r.ok());
  CHECK(r.config->experiment == ExperimentKind::ProjectionNoise);
  CHECK(*r.config->n_atoms == 400);
  CHECK(*r.config->trials == 100000);
  CHECK(*r.config->seed == 1);
}

TEST_CASE("comments, blank lines, whitespace and exponent integers") {
  const auto r = parse_config(
      "# header\n\n  experiment = projection-noise   # trailing\n"
      "n_atoms=1e5\ntrials = 2000\n");
  REQUIRE(r.ok());
  CHECK(*r.config->n_atoms == 100000);
  CHECK_FALSE(r.config->seed.has_value());
}

TEST_CASE("invariant violation cites the line") {
  const auto r = parse_config("experiment=projection-noise\nn_atoms=-5\ntrials=10");
  CHECK_FALSE(r.ok());
  CHECK(has_issue(r, "n_atoms", 2, "n_atoms >= 1"));
}

TEST_CASE("dispersive validity") {
  const auto r = parse_config(
      "experiment=single-probe\nn_atoms=100\ntrials=100\nn_r=1\nn_p=1\n"
      "c_constant=1\ndetuning=5\nlinewidth=1\n");
  CHECK_FALSE(r.ok());
  CHECK(has_issue(r, "detuning", 7, "dispersive"));
}

TEST_CASE("every problem is reported, each with its line") {
  const auto r = parse_config(
      "experiment=single-probe\n"  // 1
      "n_atoms=abc\n"              // 2 type mismatch
      "trials=10\n"                // 3
      "bogus=1\n"                  // 4 unknown key
      "n_r=-1\n"                   // 5 invariant
      "trials=11\n"                // 6 duplicate
      "no equals sign\n"           // 7 malformed
      "seed=-3\n");                // 8 not unsigned
  CHECK_FALSE(r.ok());
  CHECK(has_issue(r, "n_atoms", 2, "integer"));
  CHECK(has_issue(r, "bogus", 4, "unknown"));
  CHECK(has_issue(r, "n_r", 5, ">= 0"));
  CHECK(has_issue(r, "trials", 6, "duplicate"));
  CHECK(has_issue(r, "", 7, "key=value"));
  CHECK(has_issue(r, "seed", 8, "unsigned"));
  CHECK(has_issue(r, "n_p", 0, "required"));
  CHECK(has_issue(r, "mean_k", 0, "required"));
  // The unparseable n_atoms is not reported a second time as missing.
  CHECK(std::count_if(r.issues.begin(), r.issues.end(),
                      [](const ConfigIssue& i) { return i.key == "n_atoms"; }) == 1);
  for (const auto& i : r.issues) CHECK_FALSE(i.describe().empty());
}

TEST_CASE("missing or unknown experiment") {
  auto r = parse_config("n_atoms=4\n");
  CHECK(has_issue(r, "experiment", 0, "missing"));
  r = parse_config("experiment=teleport\n");
  CHECK(has_issue(r, "experiment", 1, "one of"));
}

TEST_CASE("experiment names round-trip") {
  for (auto kind : {ExperimentKind::ProjectionNoise, ExperimentKind::HomodyneCheck,
                    ExperimentKind::SingleProbe, ExperimentKind::DualProbe,
                    ExperimentKind::Conditional, ExperimentKind::Optimize,
                    ExperimentKind::DetuningInvariance, ExperimentKind::OracleCheck}) {
    CHECK(parse_experiment_kind(to_string(kind)) == kind);
  }
  CHECK_FALSE(parse_experiment_kind("Optimize").has_value());
}

TEST_CASE("coupling given two ways is rejected") {
  const auto r = parse_config(
      "experiment=single-probe\nn_atoms=100\ntrials=100\nn_r=1\nn_p=1\n"
      "mean_k=1e-4\nc_constant=100\ndetuning=1e6\nlinewidth=1\n");
  CHECK(has_issue(r, "c_constant", 7, "ambiguous"));
}

TEST_CASE("two-color probing needs the photon product rule") {
  const std::string base =
      "experiment=dual-probe\nn_atoms=1000\ntrials=100\nn_r=1e4\nn_p=1e2\nmean_k=1e-4\n";
  CHECK(parse_config(base + "m_r=5e3\nm_p=2e2\n").ok());
  const auto r = parse_config(base + "m_r=1e4\nm_p=3e2\n");
  CHECK(has_issue(r, "m_p", 8, "n_r n_p = m_r m_p"));
  CHECK(has_issue(parse_config(base), "m_r", 0, "required"));
}

TEST_CASE("homodyne-check with a fluctuating phase needs a zero mean") {
  const std::string base = "experiment=homodyne-check\ntrials=100\nn_r=100\nn_p=100\n";
  CHECK(parse_config(base + "mean_phi0=0.01\n").ok());
  CHECK(parse_config(base + "var_phi0=1e-4\n").ok());
  CHECK(has_issue(parse_config(base + "mean_phi0=0.01\nvar_phi0=1e-4\n"), "mean_phi0"));
}

TEST_CASE("optimize needs a valid operating point") {
  const std::string base =
      "experiment=optimize\nn_atoms=100000\nmean_k=1e-4\ndetuning=1e6\ngamma=1e4\n";
  CHECK(parse_config(base + "n_p=1e4\n").ok());
  CHECK(has_issue(parse_config(base + "n_p=1e6\n"), "n_p", 6, "eta"));
  CHECK(has_issue(parse_config(base + "mean_k=0\n"), "mean_k"));
}

TEST_CASE("sweeps") {
  const std::string base =
      "experiment=projection-noise\nn_atoms=100\ntrials=100\n";
  auto r = parse_config(base + "sweep_param=n_atoms\nsweep_start=100\nsweep_stop=1000\n"
                               "sweep_points=3\nsweep_scale=log\n");
  REQUIRE(r.ok());
  const auto v = r.config->sweep->values();
  REQUIRE(v.size() == 3);
  CHECK(v[0] == doctest::Approx(100));
  CHECK(v[1] == doctest::Approx(std::sqrt(1e5)));
  CHECK(v[2] == doctest::Approx(1000));

  r = parse_config(base + "sweep_param=n_atoms\nsweep_start=-10\nsweep_stop=10\nsweep_points=3\n");
  CHECK(has_issue(r, "n_atoms", -1, "sweep point 0"));

  r = parse_config(base + "sweep_param=experiment\nsweep_start=1\nsweep_stop=2\nsweep_points=2\n");
  CHECK(has_issue(r, "sweep_param", 4, "not a sweepable"));

  r = parse_config(base + "sweep_param=n_atoms\n");
  CHECK(has_issue(r, "sweep_start", 0, "required"));
  CHECK(has_issue(r, "sweep_points", 0, "required"));

  r = parse_config(base + "sweep_param=trials\nsweep_start=0\nsweep_stop=10\nsweep_points=2\n"
                          "sweep_scale=log\n");
  CHECK(has_issue(r, "sweep_scale", 8, "log"));

  CHECK(SweepSpec{"n_p", 5.0, 9.0, 1, SweepScale::Linear}.values() == std::vector<double>{5.0});
  CHECK(is_sweepable("n_p"));
  CHECK(is_sweepable("n_atoms"));
  CHECK_FALSE(is_sweepable("seed"));
  CHECK_THROWS_AS(with_parameter(*parse_config(base).config, "seed", 1), std::invalid_argument);
  CHECK(*with_parameter(*parse_config(base).config, "n_atoms", 99.6).n_atoms == 100);
}

TEST_CASE("serialize and parse round-trip exactly") {
  ExperimentConfig c;
  c.experiment = ExperimentKind::DualProbe;
  c.n_atoms = 100000;
  c.trials = 12345;
  c.seed = 18446744073709551615ULL;
  c.n_r = 1e4;
  c.n_p = 0.1 + 0.2;  // not representable in a short decimal
  c.m_r = 1e4;
  c.m_p = 0.1 + 0.2;
  c.mean_k = 1.0 / 3.0 * 1e-4;
  c.var_k = 1e-14;
  c.mean_phi0 = 0.0;
  c.var_phi0 = 1e-4;
  c.sweep = SweepSpec{"n_atoms", 1000, 100000, 5, SweepScale::Log};
  const auto text = join(serialize_config(c));
  const auto r = parse_config(text);
  INFO(text);
  REQUIRE(r.ok());
  CHECK(*r.config == c);
  CHECK(serialize_config(*r.config) == serialize_config(c));
}

TEST_CASE("gamma and linewidth stand in for each other") {
  const std::string base = "experiment=optimize\nn_atoms=100000\nmean_k=1e-4\ndetuning=1e6\n";
  CHECK(parse_config(base + "linewidth=1e4\n").ok());
  CHECK(parse_config(base + "gamma=1e4\n").ok());
  CHECK(has_issue(parse_config(base), "gamma", 0, "required"));
}
