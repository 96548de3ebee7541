// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <set>

#include "spinsqueeze/rng.hpp"

using spinsqueeze::Philox4x32;
using spinsqueeze::RandomStream;

TEST_CASE("philox4x32-10 known-answer vectors") {
  // Random123 reference vectors.
  CHECK(Philox4x32::block({0, 0, 0, 0}, {0, 0}) ==
        Philox4x32::counter_type{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                          {0xffffffffu, 0xffffffffu}) ==
        Philox4x32::counter_type{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
}

TEST_CASE("stream output is the block function on the advertised counter layout") {
  const std::uint64_t seed = 0x0123456789abcdefULL;
  const std::uint64_t stream = 0xfedcba9876543210ULL;
  RandomStream rng(seed, stream, 7);
  const auto block0 = Philox4x32::block({0u, 0x76543210u, 0xfedcba98u, 7u},
                                        {0x89abcdefu, 0x01234567u});
  CHECK(rng() == ((std::uint64_t{block0[1]} << 32) | block0[0]));
  CHECK(rng() == ((std::uint64_t{block0[3]} << 32) | block0[2]));
  const auto block1 = Philox4x32::block({1u, 0x76543210u, 0xfedcba98u, 7u},
                                        {0x89abcdefu, 0x01234567u});
  CHECK(rng() == ((std::uint64_t{block1[1]} << 32) | block1[0]));
  CHECK(rng.blocks_consumed() == 2);
}

TEST_CASE("substreams are reproducible and distinct") {
  RandomStream a(42, 3);
  RandomStream b(42, 3);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());

  std::set<std::uint64_t> firsts;
  for (std::uint64_t stream = 0; stream < 64; ++stream) {
    for (std::uint32_t sub = 0; sub < 4; ++sub) firsts.insert(RandomStream(42, stream, sub)());
  }
  CHECK(firsts.size() == 256);
  CHECK(RandomStream(42, 0)() != RandomStream(43, 0)());
}

TEST_CASE("uniform doubles lie in [0, 1) with mean near one half") {
  RandomStream rng(1, 0);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // sd of the mean is sqrt(1/12 / n) ~ 6.5e-4
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.004));
}
