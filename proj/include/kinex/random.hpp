#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace kinex {

// 64-bit Mersenne Twister with explicitly specified conversions, so a seed
// reproduces the same stream with any conforming standard library (the
// std:: distributions are implementation-defined and are not used).
class Rng {
 public:
  static constexpr std::string_view kAlgorithm =
      "mt19937_64; uniform01 = (x >> 11) * 2^-53; bounded = Lemire multiply-shift with rejection; "
      "substreams seeded by splitmix64(seed, index)";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Seed for independent substream `index` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace kinex
