// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "spinsqueeze/probe_schemes.hpp"
#include "spinsqueeze/statistics.hpp"

using namespace spinsqueeze;

namespace {

ProbeChannel channel(double np, double nr, double k, double vk, double phi0 = 0.0,
                     double vphi0 = 0.0) {
  return ProbeChannel{np, nr, {k, vk}, {phi0, vphi0}};
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("coupling from a dispersive line") {
  auto c = coupling_from_line({100, 1e6, 1, 0});
  CHECK(c.mean_k == doctest::Approx(1e-4).epsilon(1e-15));
  CHECK(c.var_k == 0.0);

  c = coupling_from_line({100, 1e6, 1, 1e3});
  CHECK(c.mean_k == doctest::Approx(1e-4).epsilon(1e-15));
  CHECK(c.var_k == doctest::Approx(1e-14).epsilon(1e-12));

  const double k1 = coupling_from_line({37, 3e5, 1, 0}).mean_k;
  const double k2 = coupling_from_line({37, 6e5, 1, 0}).mean_k;
  CHECK(k2 == k1 / 2.0);

  CHECK_THROWS_AS(coupling_from_line({100, 5, 1, 0}), std::domain_error);
  CHECK_NOTHROW(coupling_from_line({100, 5, 1, 0}, 2.0));
  CHECK_THROWS_AS(coupling_from_line({100, 0, 1, 0}), std::domain_error);
  CHECK_THROWS_AS(coupling_from_line({100, 100, 0, 0}), std::domain_error);
  CHECK_THROWS_AS(coupling_from_line({100, 100, 1, -1}), std::domain_error);
  // A negative k would leave the documented coupling domain.
  CHECK_THROWS_AS(coupling_from_line({-100, 100, 1, 0}), std::domain_error);
}

TEST_CASE("local oscillator offset") {
  auto o = lo_offset(channel(1, 1, 1e-4, 0), 100000);
  CHECK(o.radians == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(o.exceeds_small_angle);

  o = lo_offset(channel(1, 1, 0, 0, 0.02), 12345);
  CHECK(o.radians == 0.02);
  CHECK_FALSE(o.exceeds_small_angle);

  o = lo_offset(channel(1, 1, 2e-6, 0, 0.01), 10000);
  CHECK(o.radians == doctest::Approx(0.02).epsilon(1e-14));
}

TEST_CASE("single probe phase") {
  const auto quiet = channel(1, 1, 1e-4, 0);
  RandomStream rng(1, 0);
  CHECK(single_probe_phase(quiet, 400, 200, rng) == 0.0);

  const EnsembleSpec spec(400);
  std::vector<double> phases;
  for (int i = 0; i < 100000; ++i) {
    RandomStream r(2, static_cast<std::uint64_t>(i));
    phases.push_back(single_probe_phase(quiet, 400, sample_dicke(spec, r).up_count(spec), r));
  }
  CHECK(std::sqrt(sample_moments(phases).variance) == doctest::Approx(1e-3).epsilon(0.02));

  const auto background = channel(1, 1, 0, 0, 0, 1e-6);
  phases.clear();
  for (int i = 0; i < 100000; ++i) {
    RandomStream r(3, static_cast<std::uint64_t>(i));
    phases.push_back(single_probe_phase(background, 400, 0, r));
  }
  CHECK(sample_moments(phases).variance == doctest::Approx(1e-6).epsilon(0.05));
}

TEST_CASE("dual probe phases share k and phi0") {
  const auto ch = channel(1, 1, 1e-3, 1e-8, 0.3, 1e-2);
  for (int i = 0; i < 200; ++i) {
    RandomStream r(4, static_cast<std::uint64_t>(i));
    const std::int64_t n_up = 100 + i;
    const auto p = dual_probe_phases(ch, 400, n_up, r);
    // up + down = k (N_up - N_down); recover k from the up phase.
    RandomStream again(4, static_cast<std::uint64_t>(i));
    std::normal_distribution<double> kd(1e-3, std::sqrt(1e-8));
    const double k = kd(again);
    CHECK(p.up + p.down == doctest::Approx(k * double(2 * n_up - 400)).epsilon(1e-12));
  }
}

TEST_CASE("single probe variance worked values") {
  const auto ideal = channel(100, 10000, 1e-4, 0);
  CHECK(single_probe_variance(ideal, 100000) ==
        doctest::Approx(10100 + 1e6 * 1e-8 * 1e5).epsilon(1e-14));

  // Term by term: shot 10100; n_r n_p = 1e6 times
  // [(1e-8 + 1e-9 + 1e-14) 1e5 + 4e-8] = 1.100041e-3.
  const auto worked = channel(100, 10000, 1e-4, 1e-14, 0, 1e-8);
  CHECK(single_probe_variance(worked, 100000) ==
        doctest::Approx(11200.041).epsilon(1e-12));
  // The var(k) N^2 contribution is a tenth of the projection term.
  const double coupling_term = 1e6 * 1e-14 * 1e5 * 1e5;
  CHECK(coupling_term == doctest::Approx(0.1 * 1e6 * 1e-8 * 1e5).epsilon(1e-12));
}

TEST_CASE("dual probe variance worked values and preconditions") {
  const auto sym = channel(50, 50, 1e-3, 0);
  CHECK(dual_probe_variance(sym, sym, 1000) ==
        doctest::Approx(4 * 50 + 4 * 2500 * 1e-6 * 1000).epsilon(1e-14));

  const auto up = channel(100, 10000, 1e-4, 1e-14);
  CHECK(dual_probe_variance(up, up, 100000) == doctest::Approx(24200.004).epsilon(1e-12));

  // Product rule only: m_r m_p = n_r n_p with different factors is fine.
  const auto down = channel(200, 5000, 1e-4, 1e-14);
  CHECK(dual_probe_variance(up, down, 100000) ==
        doctest::Approx(10100 + 5200 + 4000.004).epsilon(1e-12));

  CHECK_THROWS_AS(dual_probe_variance(up, channel(101, 10000, 1e-4, 1e-14), 100000),
                  std::invalid_argument);
  CHECK_THROWS_AS(dual_probe_variance(up, channel(100, 10000, 2e-4, 1e-14), 100000),
                  std::invalid_argument);
  CHECK_THROWS_AS(dual_probe_variance(up, channel(100, 10000, 1e-4, 2e-14), 100000),
                  std::invalid_argument);
  // Within the 1e-6 relative tolerance.
  CHECK_NOTHROW(dual_probe_variance(up, channel(100 * (1 + 1e-8), 10000, 1e-4, 1e-14), 100000));
}

TEST_CASE("shot noise") {
  CHECK(shot_noise(1, 2, 3, 4) == 10);
  CHECK(shot_noise(1e4, 1e2, 1e4, 1e2) == 20200);
  CHECK(shot_noise(0, 0, 0, 0) == 0);
}

TEST_CASE("single probe criterion") {
  auto v = single_probe_criterion(channel(1, 1, 1e-4, 0), 100000);
  CHECK(v.dual_ok);
  CHECK(v.single_ok);

  v = single_probe_criterion(channel(1, 1, 1e-4, 1e-14), 100000);
  CHECK(v.dual_ok);
  CHECK_FALSE(v.single_ok);
  CHECK(v.dual_ratio == doctest::Approx(1e-6).epsilon(1e-10));
  CHECK(v.single_ratio == doctest::Approx(0.1).epsilon(1e-10));

  v = single_probe_criterion(channel(1, 1, 1e-4, 1e-18), 100000);
  CHECK(v.dual_ok);
  CHECK(v.single_ok);
  CHECK(v.dual_ratio == doctest::Approx(1e-10).epsilon(1e-10));
  CHECK(v.single_ratio == doctest::Approx(1e-5).epsilon(1e-10));
}

TEST_CASE("budget identities hold on random draws") {
  RandomStream rng(77, 0);
  auto log_uniform = [&](double lo, double hi) {
    return std::exp(std::log(lo) + rng.uniform() * (std::log(hi) - std::log(lo)));
  };
  for (int i = 0; i < 100; ++i) {
    const double nr = log_uniform(1, 1e7);
    const double np = log_uniform(1, 1e7);
    const double k = log_uniform(1e-7, 1e-2);
    const double vk = log_uniform(1e-20, 1e-8);
    const double vphi = log_uniform(1e-12, 1e-3);
    const auto n = static_cast<std::int64_t>(log_uniform(10, 1e6));
    const double dn = static_cast<double>(n);
    const auto ch = channel(np, nr, k, vk, 0.0, vphi);

    // Phase variance of k N_up + phi0 with var N_up = N/4, <N_up> = N/2.
    const double var_phase = k * k * dn / 4 + vk * dn * dn / 4 + vk * dn / 4 + vphi;
    CHECK(rel(single_probe_variance(ch, n), nr + np + 4 * nr * np * var_phase) < 1e-12);

    const double mr = log_uniform(1, 1e7);
    const auto down = channel(nr * np / mr, mr, k, vk, 0.0, 3 * vphi);
    const double sn = shot_noise(nr, np, mr, nr * np / mr);
    CHECK(rel(dual_probe_variance(ch, down, n), sn + 4 * nr * np * (k * k + vk) * dn) < 1e-12);
  }
}

TEST_CASE("dual budget has no phi0 term and is linear in N") {
  const auto quiet = channel(100, 10000, 1e-4, 1e-14);
  const auto noisy = channel(100, 10000, 1e-4, 1e-14, 0.0, 1e-4);
  CHECK(dual_probe_variance(quiet, quiet, 100000) == dual_probe_variance(noisy, noisy, 100000));

  const double sn = shot_noise(1e4, 1e2, 1e4, 1e2);
  const double a1 = dual_probe_variance(quiet, quiet, 50000) - sn;
  const double a2 = dual_probe_variance(quiet, quiet, 100000) - sn;
  CHECK(rel(a2, 2.0 * a1) < 1e-9);
}

TEST_CASE("simulated budgets agree with the analytic ones") {
  const EnsembleSpec spec(10000);
  const int trials = 100000;
  // Phases stay below ~0.05 rad: k sqrt(N/4) = 5e-3.
  const auto single = channel(100, 10000, 1e-4, 1e-12, 0.01, 1e-6);
  const auto up = channel(100, 10000, 1e-4, 1e-12, 0.01, 1e-4);
  std::vector<double> s1, s2;
  for (int i = 0; i < trials; ++i) {
    RandomStream r1(8, static_cast<std::uint64_t>(i), 0);
    s1.push_back(double(simulate_single_probe(single, spec, r1).difference));
    RandomStream r2(8, static_cast<std::uint64_t>(i), 1);
    s2.push_back(double(simulate_dual_probe(up, up, spec, r2).difference));
  }
  const auto m1 = sample_moments(s1);
  const auto m2 = sample_moments(s2);
  const double v1 = single_probe_variance(single, spec.n_atoms());
  const double v2 = dual_probe_variance(up, up, spec.n_atoms());
  INFO("single " << m1.variance << " vs " << v1 << ", dual " << m2.variance << " vs " << v2);
  CHECK(std::abs(m1.variance - v1) < 3 * m1.variance_standard_error());
  CHECK(std::abs(m2.variance - v2) < 3 * m2.variance_standard_error());
}

TEST_CASE("simulated records carry the latent projection") {
  const EnsembleSpec spec(50);
  RandomStream rng(9, 0);
  const auto rec = simulate_single_probe(channel(10, 10, 1e-3, 0), spec, rng);
  REQUIRE(rec.latent_m.has_value());
  CHECK(rec.latent_m->valid_for(spec));
  CHECK(rec.difference == rec.count_d2 - rec.count_d1);
}
