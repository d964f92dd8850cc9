#pragma once

#include <array>
#include <vector>

namespace kgsq {

using Mat2 = std::array<std::array<double, 2>, 2>;

// Coercivity function of the noise, evaluated by adaptive 2D quadrature in
// polar coordinates about k = 0:
//
//   F(n) = int ⟨n−k⟩^{−2−2α} |P⊥_{n−k} n|² (|k|^{−2} − |n|^{−2}) dk
//
// with the projector written in the stable cross form
// |P⊥_{n−k} n|² = (k₁n₂ − k₂n₁)² / |n−k|², which is bounded by |n|² ∧ |k|²
// near the two special points k = 0 and k = n.  Absolute error is kept below
// tol · (|n|^{−2α} + |n|^{−2}); exceeding the evaluation budget throws
// quad::budget_error.
double eval_F(double n1, double n2, double alpha, double tol,
              long max_evals = 80'000'000);

// Same integral with the regularized Green multiplier,
// χ̂_δ(k)|k|^{−2} − χ̂_δ(n)|n|^{−2} replacing (|k|^{−2} − |n|^{−2}).
double eval_F_delta(double n1, double n2, double alpha, double delta,
                    double tol, long max_evals = 80'000'000);

// χ̂_δ(k) = exp(−4π²k²δ) − exp(−4π²k²/δ), the spectral window of the
// regularized kernel; lies in [0,1) for k ≠ 0, δ ∈ (0,1).
double chi_delta_hat(double k_abs, double delta);

struct CoercivitySample {
    double rho;       // |n|
    double value;     // F(n), canonical evaluation
    double cross;     // second direction / perturbed mesh, isotropy witness
    double tol_abs;   // absolute error budget used at this radius
};

struct CoercivityProfile {
    double alpha = 0.0;
    double quadrature_tolerance = 0.0;  // relative tol fed to eval_F
    std::vector<CoercivitySample> samples;
};

// Evaluates F along a radius list.  Each radius is computed twice — once at
// n = (ρ, 0) on the default mesh, once at n = (0, ρ) on a perturbed mesh —
// and the two must agree within 2·tol_abs (isotropy + quadrature
// self-consistency); disagreement throws.
CoercivityProfile build_profile(double alpha, const std::vector<double>& radii,
                                double tol, long max_evals = 80'000'000);

struct KappaFit {
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    double residual = 0.0;  // min over samples of the estimate's slack, >= 0
    double rho_min = 0.0;
    double rho_max = 0.0;
};

// Fits the largest κ₁ (with its accompanying κ₂) such that
//   F(n) ≤ −κ₁|n|^{−2α} + κ₂|n|^{−2}   at every sample,
// by a descending geometric sweep over κ₁ with κ₂(κ₁) = max over samples of
// (F + κ₁ρ^{−2α})ρ².  κ₁ alone makes the bound vacuous (any κ₁ is feasible
// for large enough κ₂), so the sweep additionally requires the κ₂ term to
// stay dominated on the outer half of the radius range:
// κ₂ ≤ κ₁/2 · min{ρ^{2−2α} : ρ ≥ √(ρ_min ρ_max)}.  Requires the profile to
// span at least three decades; throws if no positive κ₁ is admissible.
KappaFit fit_kappas(const CoercivityProfile& profile);

// Rescaled continuum covariance C^λ(z) with kernel (λ² + |k|²)^{−1−α},
//   C^λ(z) = (2π)^{−1} ∫ (λ²+|k|²)^{−1−α} P⊥_k e^{ik·z} dk,
// reduced to 1D Bessel integrals along/across z.  C^λ(0) = λ^{−2α}/(4α)·Id.
Mat2 scaling_covariance(double alpha, double lambda, double z1, double z2,
                        double tol = 1e-8);

// Structure function Q^λ(z) = C^λ(0) − C^λ(z), evaluated directly through
// the difference integrand (no cancellation at small |z|).
Mat2 structure_scaling(double alpha, double lambda, double z1, double z2,
                       double tol = 1e-8);

}  // namespace kgsq
