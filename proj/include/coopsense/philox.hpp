// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
//
// A stream is identified by (key, stream id); the block index occupies the
// low counter word, so any (seed, trial, hypothesis) triple maps to an
// independent, reproducible sequence without coordination between threads.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace coopsense {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Ten Philox rounds applied to `counter` under `key`.
constexpr PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) {
  constexpr std::uint32_t kMul0 = 0xD2511F53;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    const std::uint64_t p0 = std::uint64_t{kMul0} * counter[0];
    const std::uint64_t p1 = std::uint64_t{kMul1} * counter[2];
    counter = {static_cast<std::uint32_t>(p1 >> 32) ^ counter[1] ^ key[0], static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ counter[3] ^ key[1], static_cast<std::uint32_t>(p0)};
  }
  return counter;
}

/// Sequential draws from one Philox substream.
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream, std::uint32_t substream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        counter_{0, substream, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

  std::uint32_t next_u32() {
    if (index_ == 4) refill();
    return block_[index_++];
  }

  /// Uniform on (0, 1] with 53 random bits.
  double uniform_open_low() {
    const std::uint64_t hi = next_u32();
    const std::uint64_t lo = next_u32();
    const std::uint64_t bits = ((hi << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
  }

  /// Standard normal via the Box-Muller transform.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform_open_low()));
    const double angle = 2.0 * std::numbers::pi * uniform_open_low();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Exponential with the given mean.
  double exponential(double mean) { return -mean * std::log(uniform_open_low()); }

 private:
  void refill() {
    block_ = philox4x32_10(counter_, key_);
    ++counter_[0];
    index_ = 0;
  }

  PhiloxKey key_;
  PhiloxCounter counter_;
  PhiloxCounter block_{};
  int index_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace coopsense
