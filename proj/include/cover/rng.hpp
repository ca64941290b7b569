#pragma once

#include <cstdint>
#include <cmath>
#include <numbers>
#include <random>

namespace cover {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Stable sub-seed for stage `key` of a computation driven by `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (key + 1));
    return splitmix64(s);
}

/// Engine for (seed, stream). Streams derived from the same seed are
/// independent, so parallel workers can draw without sharing state.
inline std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t s = seed ^ (0xda3e39cb94b95bdbULL * (stream + 1));
    const std::uint64_t a = splitmix64(s);
    const std::uint64_t b = splitmix64(s);
    const std::uint64_t c = splitmix64(s);
    const std::uint64_t d = splitmix64(s);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32),
                      static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(d >> 32)};
    return std::mt19937_64(seq);
}

// Explicit conversions instead of std distributions: the standard does not fix
// the distribution algorithms, and reports must reproduce bit-for-bit.
inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return lo + (hi - lo) * uniform01(g);
}

inline std::size_t uniform_index(std::mt19937_64& g, std::size_t n) {
    return static_cast<std::size_t>(g() % n);
}

inline double normal01(std::mt19937_64& g) {
    double u1 = uniform01(g);
    if (u1 < 0x1.0p-1022) u1 = 0x1.0p-1022;
    const double u2 = uniform01(g);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace cover
