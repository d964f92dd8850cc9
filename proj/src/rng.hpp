#pragma once
#include <cmath>
#include <cstdint>

namespace kgsq {

// Counter-based Gaussian generator. Every draw is a pure function of
// (seed, stream, step, index, channel), so Brownian increments replay
// bit-identically in any evaluation order and coupled runs can share a
// driver without storing paths.
namespace rng {

inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return x;
}

inline std::uint64_t chain(std::uint64_t h, std::uint64_t word) {
    return mix64(h + 0x9e3779b97f4a7c15ULL * (word + 1));
}

inline std::uint64_t key(std::uint64_t seed, std::uint64_t stream,
                         std::uint64_t step, std::uint64_t index) {
    std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc908ULL);
    h = chain(h, stream);
    h = chain(h, step);
    h = chain(h, index);
    return h;
}

inline double uniform01(std::uint64_t word) {
    // 53 mantissa bits, strictly inside (0, 1].
    return static_cast<double>((word >> 11) + 1) * 0x1.0p-53;
}

struct GaussPair {
    double a;
    double b;
};

// Two independent N(0,1) draws per (key, channel) via Box-Muller.
inline GaussPair gauss_pair(std::uint64_t k, std::uint64_t channel) {
    const std::uint64_t w0 = mix64(k ^ (0xd1342543de82ef95ULL * (2 * channel + 1)));
    const std::uint64_t w1 = mix64(k ^ (0xaf251af3b0f025b5ULL * (2 * channel + 2)));
    const double u1 = uniform01(w0);
    const double u2 = uniform01(w1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
}

// Stream ids keep independent uses of the master seed from colliding.
enum Stream : std::uint64_t {
    STREAM_NOISE = 1,
    STREAM_DATUM = 2,
    STREAM_SAMPLES = 3,
};

// Per-realization sub-seed for ensembles.
inline std::uint64_t subseed(std::uint64_t master, std::uint64_t realization) {
    return mix64(master ^ (0x94d049bb133111ebULL * (realization + 1)));
}

} // namespace rng
} // namespace kgsq
