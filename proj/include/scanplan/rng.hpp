#pragma once

#include <cmath>
#include <cstdint>

namespace scanplan {

// Counter-based noise: values are keyed by (seed, stream, counter), never by
// evaluation order, so parallel schedules reproduce serial output exactly.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_key(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return splitmix64(splitmix64(seed ^ 0x8e2f9d4b6a31c75dULL) ^
                      splitmix64(stream * 0xd1342543de82ef95ULL + counter));
}

/// Uniform in [0, 1).
inline double uniform01(std::uint64_t key) {
    return double(key >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller on two decorrelated uniforms.
inline double standard_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    const std::uint64_t k1 = hash_key(seed, stream, 2 * counter);
    const std::uint64_t k2 = hash_key(seed, stream, 2 * counter + 1);
    const double u1 = uniform01(k1);
    const double u2 = uniform01(k2);
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    return r * std::cos(6.283185307179586 * u2);
}

} // namespace scanplan
