#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "field.hpp"
#include "noise.hpp"
#include "params.hpp"

namespace kgsq {

enum class StepStatus { ok, cfl_violation, blowup };

enum class NonlinearityForm { standard, momentum };

struct StepScheme {
    double dt = 1e-3;
    double cfl_max = 0.5;
    bool noise_enabled = true;
    NonlinearityForm form = NonlinearityForm::standard;
};

struct DiagnosticRow {
    double t = 0.0;
    double l2 = 0.0, l4 = 0.0, linf = 0.0;
    double h_m1 = 0.0, h_malpha = 0.0, h_0 = 0.0;
    double max_u = 0.0;
    double cfl = 0.0;       // dt·max|u|·N/L at the recorded state
    double mean_abs = 0.0;  // |mean(θ)|, should be ~0 always
};

struct DiagnosticSeries {
    std::vector<DiagnosticRow> rows;
};

// Dealiased pseudo-spectral N^β(θ) = u·∇θ with u = −∇⊥Λ^{β−2}θ.
SpectralField nonlinearity_standard(const SpectralField& theta, double beta);

// The same quantity via the momentum route ∇⊥·((u·∇)h − (∇h)ᵀu) with
// h = −∇⊥Λ^{−2}θ; agrees with the standard form on band-limited fields.
SpectralField nonlinearity_momentum(const SpectralField& theta, double beta);

// Lemma-style two-scale preparation of an initial datum: spatial cutoff at
// radius 1/epsilon (after pulling the far field through the Laplacian) plus a
// Gaussian mollifier of width epsilon,
//   f^ε = φ^ε ∗ (−∇·(ψ^ε ∇Λ^{−2} f)).
// p is the Lebesgue exponent the datum class carries; the construction is
// uniform in p, so it only gets validated.  Throws when 2/epsilon exceeds
// L/2 (the cutoff no longer fits the torus) or when f has nonzero mean.
SpectralField approximate_datum(const SpectralField& f, double epsilon,
                                double p);

// Explicit Euler-Maruyama transport step with the total diffusion
// (c₀/2 + ν)Δ applied by its exact spectral multiplier.
class Solver {
  public:
    // noise may be null (or scheme.noise_enabled false) for the deterministic
    // equation; the model is shared, not owned, and must outlive the solver.
    Solver(const ModelParams& params, const NoiseModel* noise,
           std::uint64_t noise_seed, const StepScheme& scheme);

    const Grid& grid() const { return grid_; }
    const ModelParams& params() const { return params_; }
    const StepScheme& scheme() const { return scheme_; }
    double corrector_c0() const { return c0_; }

    SpectralField& theta() { return theta_; }
    const SpectralField& theta() const { return theta_; }
    void set_theta(const SpectralField& datum);

    double time() const { return t_; }
    std::uint64_t step_index() const { return step_; }
    double last_max_u() const { return last_max_u_; }
    double sup_max_u() const { return sup_max_u_; }

    StepStatus step();

    // Advances until t_end (an integer number of dt steps), recording a
    // diagnostics row every diag_stride steps plus the initial and final
    // states.  On abort the partial series (and the last valid state) is
    // kept.  on_record, when set, fires at every recorded state.
    StepStatus run(double t_end, int diag_stride, DiagnosticSeries* series,
                   const std::function<void(const Solver&)>& on_record = {});

    DiagnosticRow diagnostics() const;

  private:
    StepStatus step_internal();

    Grid grid_;
    ModelParams params_;
    StepScheme scheme_;
    const NoiseModel* noise_;
    BrownianDriver driver_;
    double c0_ = 0.0;

    SpectralField theta_;
    double t_ = 0.0;
    std::uint64_t step_ = 0;
    double last_max_u_ = 0.0;
    double sup_max_u_ = 0.0;

    // Preallocated workspace (one realization is strictly sequential).
    std::vector<double> diffusion_;   // exp(−(c₀/2+ν)|k|²dt)
    std::vector<double> noise_gain_;  // sqrt((1−e^{−2x})/(2x)), x=(c₀/2+ν)|k|²dt
    SpectralField sa_, sb_, nhat_, xhat_, next_;
    VectorField dw_;
    RealField u1_, u2_, g1_, g2_, w1_, w2_, prod_;
};

}  // namespace kgsq
