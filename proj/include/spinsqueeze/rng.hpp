// SPDX-License-Identifier: Apache-2.0
//
// Counter-based random streams.
//
// Philox4x32-10 (Salmon et al., SC 2011). Every random draw in the library is
// addressed by (seed, stream, substream, block) so that a trial's numbers do
// not depend on which worker thread evaluates it or in what order.
#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace spinsqueeze {

/// Name recorded in CSV metadata so that output can be traced to a generator.
inline constexpr std::string_view kRngAlgorithm = "philox4x32-10";

class Philox4x32 {
 public:
  using counter_type = std::array<std::uint32_t, 4>;
  using key_type = std::array<std::uint32_t, 2>;

  /// Raw block function: ten rounds of Philox on one 128-bit counter.
  static counter_type block(counter_type ctr, key_type key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeylA;
        key[1] += kWeylB;
      }
      const std::uint64_t p0 = std::uint64_t{kMulA} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMulB} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMulA = 0xD2511F53u;
  static constexpr std::uint32_t kMulB = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeylA = 0x9E3779B9u;
  static constexpr std::uint32_t kWeylB = 0xBB67AE85u;
};

/// A UniformRandomBitGenerator over one independent Philox substream.
///
/// The 64-bit seed is the Philox key. The counter is laid out as
/// {block, stream_lo, stream_hi, substream}: `stream` is typically the trial
/// index and `substream` separates sweep points or independent purposes.
/// Each substream therefore owns 2^32 blocks (2^33 outputs) by construction.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t stream,
               std::uint32_t substream = 0) noexcept
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        counter_{0u, static_cast<std::uint32_t>(stream),
                 static_cast<std::uint32_t>(stream >> 32), substream} {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    if (next_ >= 2) refill();
    const std::uint64_t lo = buffer_[2 * next_];
    const std::uint64_t hi = buffer_[2 * next_ + 1];
    ++next_;
    return (hi << 32) | lo;
  }

  /// Uniform double on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  std::uint32_t blocks_consumed() const noexcept { return counter_[0]; }

 private:
  void refill() noexcept {
    buffer_ = Philox4x32::block(counter_, key_);
    ++counter_[0];
    next_ = 0;
  }

  Philox4x32::key_type key_;
  Philox4x32::counter_type counter_;
  Philox4x32::counter_type buffer_{};
  int next_ = 2;
};

}  // namespace spinsqueeze
