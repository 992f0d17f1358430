#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

// Seed derivation and common random draws. Every stochastic component owns a
// separate engine derived from the run seed, so paired runs that differ only
// in the receiver configuration consume identical sample streams.

namespace linksim::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive(std::uint64_t base, std::uint64_t salt) {
    return splitmix64(splitmix64(base) ^ splitmix64(~salt));
}

inline std::mt19937_64 make_engine(std::uint64_t base, std::uint64_t salt) {
    return std::mt19937_64(derive(base, salt));
}

// CN(0,1): unit-variance circularly symmetric complex Gaussian.
inline std::complex<double> complex_gaussian(std::mt19937_64& eng) {
    constexpr double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
    std::normal_distribution<double> dist(0.0, 1.0);
    const double re = dist(eng);
    const double im = dist(eng);
    return {re * inv_sqrt2, im * inv_sqrt2};
}

// Uniform angle on [-pi/2, pi/2].
inline double uniform_angle(std::mt19937_64& eng) {
    std::uniform_real_distribution<double> dist(-std::numbers::pi / 2.0, std::numbers::pi / 2.0);
    return dist(eng);
}

}  // namespace linksim::rng
