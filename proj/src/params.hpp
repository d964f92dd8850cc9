#pragma once
#include <string>
#include <vector>

namespace kgsq {

// Model parameters for the stochastically forced transport equation
//   d theta + u.grad theta dt + dW.grad theta = (c0/2 + nu) Lap theta dt,
//   u = -grad^perp Lambda^(beta-2) theta,
// with Kraichnan spectral exponent alpha. beta = 0 is the vorticity-form
// Euler case, beta in (0,1] the generalized SQG family.
struct ModelParams {
    double alpha = 0.5;   // noise roughness, in (0,1)
    double beta = 0.0;    // constitutive exponent, in [0,1]
    double p = 2.0;       // integrability of the initial datum, in (1,inf)
    double nu = 0.0;      // viscosity, >= 0
    double L = 2.0 * 3.14159265358979323846;
    int N = 256;

    void check() const;  // throws invalid_argument on out-of-range fields
};

// p*(alpha, beta) = 1 / (1 - alpha - beta/2); defined for alpha + beta/2 < 1.
double critical_exponent(double alpha, double beta);

enum class Regime { Euler, GeneralizedSQG };

struct ValidationReport {
    Regime regime = Regime::Euler;
    double p_star = 0.0;        // NaN when alpha + beta/2 >= 1
    bool uniqueness = false;    // admissible for the pathwise theory
    bool critical = false;      // |p - p*| below 1e-12 relative
    bool supercritical = false; // p < p*: less integrability than the theory needs
    bool conjectural = false;   // alpha+beta > 1 but alpha+beta/2 < 1 band
    double r_sufficient = 0.0;  // r with 1/r = (alpha+beta)/2 + 1/p
    bool r_condition = false;   // r > 1 and alpha + beta <= 1
    std::vector<std::string> notes;
};

ValidationReport validate(const ModelParams& mp);

} // namespace kgsq
