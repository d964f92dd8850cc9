#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "field.hpp"
#include "noise.hpp"
#include "params.hpp"
#include "solver.hpp"

namespace kgsq {

struct Stat {
    double mean = 0.0;
    double se = 0.0;  // standard error of the mean; 0 flags a deterministic value
};

Stat summarize(const std::vector<double>& xs);

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Recommended ensemble floor for the Monte Carlo studies; smaller ensembles
// run fine (a single realization is the reproducibility contract) but the
// reports carry a low_ensemble flag.
inline constexpr int kEnsembleFloor = 64;

// Runs fn(i) for i in [0, n) on up to `threads` workers.  Work is
// pre-partitioned in index order and every task writes only its own slot, so
// results never depend on the thread count.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

struct RateRung {
    double nu_hi = 0.0;  // the coarser viscosity of the adjacent pair
    double nu_lo = 0.0;
    Stat sup_h_m1_sq;       // sup over t of the ensemble-mean ‖ξ_t‖²_{Ḣ^{−1}}
    Stat int_h_malpha_sq;   // ensemble mean of ∫₀^T ‖ξ_s‖²_{Ḣ^{−α}} ds
};

struct RateStudy {
    std::vector<double> ladder;
    std::vector<RateRung> rungs;     // one per adjacent ladder pair
    double slope = 0.0;              // log-log slope of the unsquared sup error vs ν
    bool slope_defined = false;
    bool complete = false;           // false once any realization trips the guard
    int ensemble = 0;
    int ensemble_done = 0;
    bool low_ensemble = false;
    std::string note;
};

// Coupled vanishing-viscosity study: for every realization, one solver per
// ladder entry consumes bit-identical Brownian increments (shared seed) from
// the same datum; adjacent-pair errors are the Cauchy functionals.
RateStudy run_vanishing_viscosity(const ModelParams& params,
                                  const NoiseModel& noise,
                                  const SpectralField& datum,
                                  const std::vector<double>& ladder,
                                  int ensemble, std::uint64_t seed,
                                  double t_end, const StepScheme& scheme,
                                  int threads);

struct StabilityReport {
    std::vector<double> times;
    std::vector<Stat> xi_h_m1_sq;   // E‖ξ_t‖²_{Ḣ^{−1}} at each recorded time
    Stat dissipation;               // E ∫₀^T ‖ξ_s‖²_{Ḣ^{−α}} ds
    double xi0_h_m1_sq = 0.0;
    double envelope_c = 0.0;        // smallest C with mean curve ≤ e^{Ct}·m(0)
    bool identical = false;         // ξ stayed exactly zero at every output
    bool complete = false;
    int ensemble = 0;
    int ensemble_done = 0;
    bool low_ensemble = false;
};

// Coupled two-datum study under common random numbers (one driver per
// realization, consumed by both solvers).
StabilityReport run_stability(const ModelParams& params,
                              const NoiseModel& noise,
                              const SpectralField& datum1,
                              const SpectralField& datum2, int ensemble,
                              std::uint64_t seed, double t_end,
                              const StepScheme& scheme, int threads);

struct TrilinearReport {
    double alpha = 0.0, beta = 0.0, p = 0.0;
    double p_star = 0.0;
    double r1 = 0.0, r2 = 0.0;
    int samples = 0;
    std::array<double, 3> max_ratio{};
    std::array<double, 3> median_ratio{};
    std::vector<std::array<double, 3>> ratios;  // per sample, three pairings
};

// Raw pairings for one (ξ, φ, θ) triple: |LHS| of the three trilinear forms
// and the matching RHS norm products.  Fields must share a grid.
struct TrilinearTerms {
    std::array<double, 3> lhs{};
    std::array<double, 3> rhs{};
};

TrilinearTerms trilinear_terms(const SpectralField& xi,
                               const SpectralField& phi,
                               const SpectralField& theta,
                               const ModelParams& params);

// Monte Carlo check of the three trilinear pairings: random band-limited
// (ξ, φ, θ) triples, each left-hand side by exact collocation quadrature,
// each right-hand side from the interpolated negative-Sobolev norms and
// ‖θ‖_{L^p} with the proof's exponents r₁ = 1 − p⋆/p,
// r₂ = (1−α−β)/(1−α)·(1 − p⋆/p).
TrilinearReport trilinear_ratios(const ModelParams& params, int samples,
                                 std::uint64_t seed, int threads);

// Weak-form defect of a recorded trajectory against a band-limited test
// function: |⟨θ_T,φ⟩ − ⟨θ₀,φ⟩ − Σ_k dt⟨θ_k, u_k·∇φ⟩ −
// Σ_k ⟨θ_k, ΔW_k·∇φ⟩ − (c₀/2+ν) Σ_k dt⟨θ_k, Δφ⟩| relative to the largest
// term.  The series must hold every step's state (θ_0 … θ_K); increments are
// replayed from the driver.  Pairings with products of band-limited factors
// are evaluated on a twice-refined grid so they carry no aliasing error.
double residual_weak_form(const std::vector<SpectralField>& theta_series,
                          const SpectralField& test_function,
                          const ModelParams& params, const NoiseModel* noise,
                          const BrownianDriver& driver, double dt);

}  // namespace kgsq
