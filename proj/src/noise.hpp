#pragma once
#include <array>
#include <cstdint>
#include <vector>

#include "field.hpp"

namespace kgsq {

using Mat2 = std::array<std::array<double, 2>, 2>;

struct NoiseMode {
    int m1 = 0;         // integer lattice frequency
    int m2 = 0;
    double k1 = 0.0;    // wavenumber components (2*pi/L) * m
    double k2 = 0.0;
    double amp = 0.0;   // <k>^(-1-alpha)
    double e1 = 0.0;    // k^perp / |k|
    double e2 = 0.0;
};

// Truncated Kraichnan model on the torus lattice: divergence-free modes
//   W(t,x) = sum_k amp_k e_k [cos(k.x) B_k(t) + sin(k.x) B'_k(t)] sqrt(norm),
// norm = 2*pi/L^2, over 0 < |k| <= kmax. The mode set is closed under
// k <-> -k; each lattice point carries its own Brownian pair.
class NoiseModel {
public:
    NoiseModel() = default;
    // kmax in wavenumber units; must not exceed the dealiased band of g
    NoiseModel(const Grid& g, double alpha, double kmax);

    const Grid& grid() const { return grid_; }
    double alpha() const { return alpha_; }
    double kmax() const { return kmax_; }
    double normalization() const { return norm_; }
    const std::vector<NoiseMode>& modes() const { return modes_; }

    // Tr C(0) / 2 = (1/2) sum_k amp_k^2 * norm
    double corrector_c0() const;

    // lattice covariance C(z) = sum_k amp_k^2 (e_k x e_k) cos(k.z) * norm
    Mat2 covariance_C(double z1, double z2) const;

    // structure function Q(z) = C(0) - C(z)
    Mat2 structure_Q(double z1, double z2) const;

private:
    Grid grid_;
    double alpha_ = 0.5;
    double kmax_ = 0.0;
    double norm_ = 0.0;
    std::vector<NoiseMode> modes_;
};

// Deterministic Brownian driver: increment (dB, dB') of mode i at a step is
// a pure function of (seed, step, i), scaled by sqrt(dt).
class BrownianDriver {
public:
    BrownianDriver() = default;
    explicit BrownianDriver(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    struct Increment {
        double db;   // cosine channel
        double dbp;  // sine channel
    };
    Increment draw(std::uint64_t step, std::uint64_t mode, double dt) const;

private:
    std::uint64_t seed_ = 0;
};

// Synthesizes the spectral increment field dW over one step of size dt.
// Both components are band-limited to |k| <= kmax.
void sample_increment(const NoiseModel& model, const BrownianDriver& driver,
                      std::uint64_t step, double dt, VectorField& out);

} // namespace kgsq
