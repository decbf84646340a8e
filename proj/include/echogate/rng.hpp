#pragma once

#include <cmath>
#include <cstdint>

#include "echogate/constants.hpp"

namespace echogate {

// Counter-based deterministic RNG.
//
// Monte-Carlo error estimates must be bit-identical across runs, platforms
// and thread counts, so instead of std::mt19937 (whose distributions are
// implementation-defined) each draw is a pure function of (seed, stream,
// counter).  Sample i always consumes the same stream regardless of which
// thread evaluates it.
//
// The mixer is splitmix64 (Steele/Lea/Flood appendix), a well-tested
// bijective finalizer; successive counters give independent 64-bit words.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : state_(splitmix64(seed ^ splitmix64(stream))) {}

    std::uint64_t next_u64() { return splitmix64(state_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

    // Uniform in (0, 1]; never returns 0 so log() below is safe.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller (bit-reproducible, unlike
    // std::normal_distribution).  The unused second variate is discarded
    // to keep every draw a function of the counter alone.
    double next_normal() {
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    }

    // Normal truncated to +/- nsigma standard deviations (resample).
    double next_truncated_normal(double nsigma) {
        for (;;) {
            const double z = next_normal();
            if (std::abs(z) <= nsigma) return z;
        }
    }

  private:
    std::uint64_t state_;
    std::uint64_t counter_ = 0;
};

}  // namespace echogate
