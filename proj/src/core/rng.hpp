// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>

namespace twistlab {

/// Philox4x32-10 counter-based generator.
///
/// A stream is identified by (seed, stream); the counter walks through the
/// stream. Two generators with the same key produce the same sequence no
/// matter which thread drives them, which is what makes parallel Monte-Carlo
/// runs reproducible bit for bit.
class Philox {
 public:
  using result_type = std::uint64_t;

  Philox(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        ctr_{0, 0, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    if (pos_ == 2) {
      block_ = bijection(ctr_, key_);
      if (++ctr_[0] == 0) ++ctr_[1];
      pos_ = 0;
    }
    const auto i = 2 * pos_++;
    return (std::uint64_t{block_[i + 1]} << 32) | block_[i];
  }

  /// Uniform double in [0,1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo,hi).
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  /// The keyed bijection itself (ten rounds); exposed for known-answer tests.
  static Block bijection(Block c, Key k) noexcept {
    constexpr std::uint32_t kM0 = 0xD2511F53, kM1 = 0xCD9E8D57;
    constexpr std::uint32_t kW0 = 0x9E3779B9, kW1 = 0xBB67AE85;
    for (int r = 0; r < 10; ++r) {
      const std::uint64_t p0 = std::uint64_t{kM0} * c[0];
      const std::uint64_t p1 = std::uint64_t{kM1} * c[2];
      c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
      k[0] += kW0;
      k[1] += kW1;
    }
    return c;
  }

  /// Independent generator for a derived task, e.g. one orbit inside a cell.
  Philox substream(std::uint64_t index) const noexcept {
    std::uint64_t k = (std::uint64_t{key_[1]} << 32) | key_[0];
    std::uint64_t s = (std::uint64_t{ctr_[3]} << 32) | ctr_[2];
    return Philox(mix(k ^ mix(s + 0x9e3779b97f4a7c15ULL)), index);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  Key key_;
  Block ctr_;
  Block block_{};
  int pos_ = 2;
};

}  // namespace twistlab
