#pragma once

#include <cmath>
#include <cstdint>

#include "qmle/common.hpp"

namespace qmle {

/// SplitMix64 walk used for all Monte Carlo draws.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t state) : state_(state) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in the open interval (0, 1).
    double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (two uniforms per draw, no caching).
    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

  private:
    std::uint64_t state_;
};

/// Splittable record-indexed streams: stream(i) depends only on (seed, i),
/// so per-record generation is order-independent and parallel generation
/// reproduces the serial output bit for bit.
class SplitRng {
  public:
    explicit SplitRng(std::uint64_t seed) : seed_(seed) {}

    RandomStream stream(std::uint64_t index) const {
        std::uint64_t z = seed_ ^ (0x9E3779B97F4A7C15ull * (index + 1) + 0xD1B54A32D192ED03ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return RandomStream(z ^ (z >> 31));
    }

  private:
    std::uint64_t seed_;
};

}  // namespace qmle
