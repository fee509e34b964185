#pragma once

// Deterministic pseudo-random generator for scenario construction.
//
// SplitMix64 (Steele, Lea & Flood), with the published constants
// 0x9E3779B97F4A7C15 / 0xBF58476D1CE4E5B9 / 0x94D049BB133111EB. Pure 64-bit
// integer arithmetic, so a seed produces the same stream on every platform.

#include <cstdint>

namespace socnav {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// +1 or -1 with equal probability.
    int sign() { return (next_u64() & 1ull) ? 1 : -1; }

private:
    std::uint64_t state_;
};

}  // namespace socnav
