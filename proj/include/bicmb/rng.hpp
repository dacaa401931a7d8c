#pragma once

// Deterministic random number plumbing. Everything that consumes
// randomness takes an explicit generator, and all generators are derived
// from a single master seed, so identical seeds give identical results
// no matter how work is scheduled.
//
// Gaussian samples come from a hand-rolled Box-Muller on top of raw
// mt19937_64 output rather than std::normal_distribution, whose exact
// sequence is implementation-defined.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace bicmb {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Per-frame seed: a pure function of (master seed, SNR point, frame index),
// so frames can be simulated in any order or on any worker.
inline std::uint64_t frame_seed(std::uint64_t master, std::uint64_t snr_index,
                                std::uint64_t frame_index) {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ (0x9e3779b97f4a7c15ULL * (snr_index + 1)));
    h = splitmix64(h ^ (0xbf58476d1ce4e5b9ULL * (frame_index + 1)));
    return h;
}

// Uniform in [0,1) with 53 bits of mantissa.
inline double uniform53(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// One pair of independent N(0,1) samples (Box-Muller).
inline std::pair<double, double> gaussian_pair(std::mt19937_64& rng) {
    double u1 = 1.0 - uniform53(rng);  // (0,1], keeps log finite
    double u2 = uniform53(rng);
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 2.0 * M_PI * u2;
    return {r * std::cos(t), r * std::sin(t)};
}

// Circularly symmetric complex Gaussian, unit variance (CN(0,1)).
inline std::complex<double> complex_gaussian(std::mt19937_64& rng) {
    auto [a, b] = gaussian_pair(rng);
    return {a * M_SQRT1_2, b * M_SQRT1_2};
}

}  // namespace bicmb
