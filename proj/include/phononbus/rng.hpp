#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "phononbus/constants.hpp"

namespace phononbus {

// SplitMix64 output finalizer.  Used only to derive well-separated seeds.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Splitting rule for independent random streams: stream k of a master seed
// is the k-th output of a SplitMix64 generator seeded with the master seed.
// Every consumer of randomness (trajectory, sweep point) gets its stream id
// from its position, never from execution order, so results are
// reproducible across thread counts.
inline std::uint64_t derive_stream_seed(std::uint64_t master_seed,
                                        std::uint64_t stream_id) {
  return splitmix64(master_seed + stream_id * 0x9E3779B97F4A7C15ULL);
}

// Standard-normal sampler with a fixed, portable algorithm.  The C++
// standard does not pin down std::normal_distribution, so this hand-rolled
// Box-Muller over raw mt19937_64 bits keeps streams bit-reproducible across
// standard libraries.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // 53-bit uniforms; u1 shifted into (0, 1] so the log is finite.
    const double u1 =
        (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * pi * u2;
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
  }

  std::uint64_t raw() { return rng_(); }

 private:
  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace phononbus
