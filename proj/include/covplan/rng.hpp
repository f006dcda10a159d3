#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

// Seeded randomness. Every consumer derives a named stream from one global
// seed, so results are reproducible and independent of evaluation order.
// Distribution helpers are hand-rolled because the std:: distributions are
// implementation-defined and would break byte-level reproducibility across
// toolchains.

namespace covplan::rng {

using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derive a child seed from (base seed, stream name, stream index).
inline std::uint64_t derive(std::uint64_t base, std::string_view stream, std::uint64_t index = 0) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the stream tag
    for (char c : stream) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return splitmix64(splitmix64(base ^ h) + index);
}

inline Engine make(std::uint64_t base, std::string_view stream, std::uint64_t index = 0) {
    return Engine(derive(base, stream, index));
}

/// Uniform double in [0, 1).
inline double uniform01(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double uniform(Engine& eng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(eng);
}

/// Unbiased uniform integer in [0, n). n must be positive.
inline std::uint64_t uniform_index(Engine& eng, std::uint64_t n) {
    const std::uint64_t limit = n * (UINT64_MAX / n);
    std::uint64_t x;
    do {
        x = eng();
    } while (x >= limit);
    return x % n;
}

/// Standard normal via Box-Muller; consumes exactly two draws per call.
inline double normal(Engine& eng) {
    double u1 = uniform01(eng);
    double u2 = uniform01(eng);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace covplan::rng
