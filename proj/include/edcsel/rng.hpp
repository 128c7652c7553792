#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace edcsel {

// SplitMix64 step; used both as the stream generator and as the mixing
// function for seed derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Derives a child seed from a base seed and a list of counters
// (replication index, candidate index, ...). The derivation depends only
// on the values, never on scheduling, so concurrent work units draw
// identical streams regardless of worker count.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> counters) {
    std::uint64_t h = base ^ 0xD6E8FEB86659FD93ULL;
    splitmix64(h);
    for (std::uint64_t c : counters) {
        h ^= c + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        splitmix64(h);
    }
    return h;
}

// Small self-contained RNG stream. Deterministic across platforms for a
// given seed; no hidden global state.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // decorrelate trivially related seeds
        splitmix64(state_);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n); n must be >= 1. Bias is negligible for
    // the small n used here (alphabet sizes, start counts).
    std::uint64_t uniform_int(std::uint64_t n) { return next_u64() % n; }

    // Standard normal via Marsaglia polar; second draw is cached.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        cached_ = v * f;
        have_cached_ = true;
        return u * f;
    }

  private:
    std::uint64_t state_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace edcsel
