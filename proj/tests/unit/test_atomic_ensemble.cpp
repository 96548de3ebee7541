// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <array>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "spinsqueeze/atomic_ensemble.hpp"

using namespace spinsqueeze;

namespace {

// Exact C(n, k) by Pascal's triangle; fits in uint64 for n <= 60.
std::vector<std::uint64_t> pascal_row(int n) {
  std::vector<std::uint64_t> row{1};
  for (int i = 1; i <= n; ++i) {
    std::vector<std::uint64_t> next(static_cast<std::size_t>(i) + 1, 1);
    for (int k = 1; k < i; ++k) next[k] = row[k - 1] + row[k];
    row = std::move(next);
  }
  return row;
}

double exact_weight(int n, int up) {
  return std::ldexp(static_cast<double>(pascal_row(n)[static_cast<std::size_t>(up)]), -n);
}

}  // namespace

TEST_CASE("ensemble invariants") {
  CHECK_THROWS_AS(EnsembleSpec(0), std::domain_error);
  CHECK_THROWS_AS(EnsembleSpec(-5), std::domain_error);
  CHECK(EnsembleSpec(7).bloch_radius() == 3.5);

  const EnsembleSpec odd(3);
  CHECK(DickeProjection::from_value(1.5).valid_for(odd));
  CHECK_FALSE(DickeProjection::from_value(1.0).valid_for(odd));
  CHECK_FALSE(DickeProjection::from_value(2.5).valid_for(odd));
  CHECK_THROWS_AS(DickeProjection::from_value(0.25), std::domain_error);
  CHECK(DickeProjection::from_up_count(odd, 0).value() == -1.5);
}

TEST_CASE("css_dicke_weight worked values") {
  CHECK(css_dicke_weight(EnsembleSpec(2), DickeProjection::from_value(0)) ==
        doctest::Approx(0.5).epsilon(1e-14));
  CHECK(css_dicke_weight(EnsembleSpec(4), DickeProjection::from_value(2)) ==
        doctest::Approx(0.0625).epsilon(1e-14));
  CHECK_THROWS_AS(css_dicke_weight(EnsembleSpec(4), DickeProjection::from_value(3)),
                  std::domain_error);
  CHECK_THROWS_AS(css_dicke_weight(EnsembleSpec(4), DickeProjection::from_value(0.5)),
                  std::domain_error);
}

TEST_CASE("css_dicke_weight at N = 1000 matches an independent product oracle") {
  // C(1000, 500) / 2^1000 = prod_{i=1}^{500} (500 + i) / (4 i)
  long double oracle = 1.0L;
  for (int i = 1; i <= 500; ++i) oracle *= (500.0L + i) / (4.0L * i);
  const double w = css_dicke_weight(EnsembleSpec(1000), DickeProjection::from_value(0));
  CHECK(std::abs(w / static_cast<double>(oracle) - 1.0) < 1e-10);
}

TEST_CASE("weights agree with exact binomials, normalize, and are symmetric for N <= 60") {
  for (int n = 1; n <= 60; ++n) {
    const EnsembleSpec spec(n);
    double total = 0.0;
    double second = 0.0;
    for (int up = 0; up <= n; ++up) {
      const auto m = DickeProjection::from_up_count(spec, up);
      const double w = css_dicke_weight(spec, m);
      REQUIRE(std::abs(w - exact_weight(n, up)) <= 1e-13 * exact_weight(n, up) + 1e-300);
      CHECK(w == css_dicke_weight(spec, DickeProjection::from_twice_m(-m.twice_m())));
      total += w;
      second += m.value() * m.value() * w;
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
    CHECK(std::abs(second - n / 4.0) < 1e-12 * n);
  }
}

TEST_CASE("css_moments") {
  const auto m4 = css_moments(EnsembleSpec(4));
  CHECK(m4.mean_m == 0.0);
  CHECK(m4.var_m == 1.0);
  CHECK(m4.var_population_difference == 4.0);
  CHECK(m4.mean_population_up == 2.0);
  CHECK(m4.var_population_up == 1.0);

  const auto m1 = css_moments(EnsembleSpec(1));
  CHECK(m1.var_m == 0.25);
  CHECK(m1.var_population_difference == 1.0);
  CHECK(m1.mean_population_up == 0.5);

  const auto big = css_moments(EnsembleSpec(100000));
  CHECK(big.var_population_difference == 100000.0);
  CHECK(big.var_population_difference == 4.0 * big.var_population_up);
}

TEST_CASE("sample_dicke support and variance") {
  const EnsembleSpec one(1);
  for (std::uint64_t s = 0; s < 200; ++s) {
    RandomStream rng(s, 0);
    const double m = sample_dicke(one, rng).value();
    CHECK((m == 0.5 || m == -0.5));
  }

  const EnsembleSpec spec(400);
  const int trials = 100000;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int i = 0; i < trials; ++i) {
    RandomStream rng(11, static_cast<std::uint64_t>(i));
    const auto m = sample_dicke(spec, rng);
    REQUIRE(m.valid_for(spec));
    sum += m.value();
    sum2 += m.value() * m.value();
  }
  const double mean = sum / trials;
  const double var = (sum2 - trials * mean * mean) / (trials - 1);
  CHECK(var == doctest::Approx(100.0).epsilon(0.02));
}

TEST_CASE("sample_dicke at N = 2 reproduces the exact weights") {
  const EnsembleSpec spec(2);
  const int trials = 200000;
  std::array<int, 3> counts{};
  for (int i = 0; i < trials; ++i) {
    RandomStream rng(static_cast<std::uint64_t>(i), 0);
    counts[static_cast<std::size_t>(sample_dicke(spec, rng).up_count(spec))]++;
  }
  const std::array<double, 3> p{0.25, 0.5, 0.25};
  for (std::size_t k = 0; k < 3; ++k) {
    const double se = std::sqrt(p[k] * (1 - p[k]) / trials);
    CHECK(std::abs(counts[k] / double(trials) - p[k]) < 4.0 * se);
  }
}

TEST_CASE("sampler passes a chi-squared test against the Dicke weights for N <= 20") {
  const int samples = 1000000;
  for (int n : {1, 2, 5, 10, 17, 20}) {
    const EnsembleSpec spec(n);
    std::vector<long> counts(static_cast<std::size_t>(n) + 1, 0);
    for (int i = 0; i < samples; ++i) {
      RandomStream rng(2024, static_cast<std::uint64_t>(i), static_cast<std::uint32_t>(n));
      counts[static_cast<std::size_t>(sample_dicke(spec, rng).up_count(spec))]++;
    }
    // Pool tail cells with expected count < 5.
    double stat = 0.0;
    int cells = 0;
    double pooled_obs = 0.0;
    double pooled_exp = 0.0;
    for (int up = 0; up <= n; ++up) {
      const double expected =
          samples * css_dicke_weight(spec, DickeProjection::from_up_count(spec, up));
      if (expected < 5.0) {
        pooled_obs += counts[static_cast<std::size_t>(up)];
        pooled_exp += expected;
        continue;
      }
      const double d = counts[static_cast<std::size_t>(up)] - expected;
      stat += d * d / expected;
      ++cells;
    }
    if (pooled_exp > 0.0) {
      stat += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
      ++cells;
    }
    const int dof = std::max(1, cells - 1);
    const double critical =
        boost::math::quantile(boost::math::complement(boost::math::chi_squared(dof), 1e-3));
    INFO("N = " << n << ", chi2 = " << stat << ", dof = " << dof);
    CHECK(stat < critical);
  }
}
