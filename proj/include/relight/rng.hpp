#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

namespace relight::rng {

// splitmix64 finalizer. Used to derive independent streams from a
// (seed, stream-index) pair so that parallel producers draw the same
// numbers regardless of worker count or iteration order.
constexpr std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    return mix(mix(seed) ^ (stream * 0xD1B54A32D192ED03ull + 1));
}

inline std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(derive(seed, index));
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Box-Muller pair of independent standard normals. Hand-rolled so the
// sequence is identical across standard libraries.
inline std::pair<double, double> normal_pair(std::mt19937_64& g) {
    const double u1 = 1.0 - uniform01(g);  // (0, 1]
    const double u2 = uniform01(g);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586476925286766559 * u2;
    return {r * std::cos(t), r * std::sin(t)};
}

}  // namespace relight::rng
