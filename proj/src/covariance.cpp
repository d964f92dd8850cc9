#include "covariance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "quadrature.hpp"

namespace kgsq {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// χ̂_δ(k)/k², evaluated as e^{−4π²k²δ}·(1 − e^{−4π²k²(1/δ−δ)})/k² with expm1
// so the small-k regime (where the two Gaussians cancel to O(k²)) stays
// accurate; the k → 0 limit is 4π²(1/δ − δ).
double chi_over_k2(double k2, double delta) {
    const double a = 4.0 * kPi * kPi;
    const double span = 1.0 / delta - delta;
    if (k2 < 1e-280) return a * span;
    return std::exp(-a * delta * k2) * (-std::expm1(-a * k2 * span)) / k2;
}

struct FMesh {
    std::vector<double> r_breaks;
    std::vector<double> psi_breaks;
    double tail_bound = 0.0;
};

// Radial/angular panel skeleton for the F integrand around n with |n| = ρ.
// ψ is the angle of k measured from the direction of n; the integrand depends
// on (r, ψ) only.  Radial breaks resolve the origin, the kernel's unit scale,
// the neighbourhood of r = ρ (where k = n makes the projector factor merely
// bounded, not smooth), any δ-window scales, and a geometrically doubled tail
// cut off once the analytic remainder bound drops below its share of tol.
FMesh make_f_mesh(double rho, double alpha, double tol_abs, double delta,
                  double psi_offset, double extra_break_factor) {
    FMesh mesh;
    std::vector<double>& r = mesh.r_breaks;
    r = {0.0, 0.25 * rho, 0.5 * rho, 0.75 * rho, rho,
         1.25 * rho, 1.5 * rho, 2.0 * rho};
    if (rho > 4.0) {
        for (double d : {4.0, 2.0, 1.0}) {
            r.push_back(rho - d);
            r.push_back(rho + d);
        }
    }
    if (extra_break_factor > 0.0) r.push_back(extra_break_factor * rho);
    if (delta > 0.0) {
        // Outer and inner Gaussian roll-off scales of χ̂_δ.
        const double outer = 1.0 / (2.0 * kPi * std::sqrt(delta));
        const double inner = std::sqrt(delta) / (2.0 * kPi);
        for (double m : {0.25, 0.5, 1.0, 2.0, 4.0}) {
            r.push_back(m * outer);
            r.push_back(m * inner);
        }
    }

    // Tail: for r >= R >= 2ρ the integrand (with Jacobian) is bounded by
    // 2^{2+2α} r^{−1−2α}, so the remainder past R is 2π·2^{2+2α}R^{−2α}/(2α).
    const double share = 0.1 * tol_abs;
    const double tail_const = 2.0 * kPi * std::pow(2.0, 2.0 + 2.0 * alpha) /
                              (2.0 * alpha);
    double R = std::max(2.0 * rho, 2.0);
    int octaves = 0;
    while (tail_const * std::pow(R, -2.0 * alpha) > share && octaves < 400) {
        R *= 2.0;
        r.push_back(R);
        ++octaves;
    }
    mesh.tail_bound = tail_const * std::pow(R, -2.0 * alpha);
    if (mesh.tail_bound > share)
        throw quad::budget_error("coercivity tail cannot reach tolerance");

    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    // Drop anything outside (0, R]; keep 0 itself as the first break.
    std::vector<double> kept;
    kept.push_back(0.0);
    for (double v : r)
        if (v > 0.0 && v <= R) kept.push_back(v);
    r = std::move(kept);

    for (int j = 0; j <= 8; ++j)
        mesh.psi_breaks.push_back(psi_offset + j * kPi / 4.0);
    return mesh;
}

// Core quadrature shared by eval_F and eval_F_delta.  delta <= 0 selects the
// plain (|k|^{−2} − |n|^{−2}) factor.
double eval_f_impl(double rho, double alpha, double tol, double delta,
                   long max_evals, double psi_offset,
                   double extra_break_factor) {
    if (!(rho > 0.0)) throw std::invalid_argument("eval_F requires n != 0");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("alpha must lie in (0,1)");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");

    const double tol_abs =
        tol * (std::pow(rho, -2.0 * alpha) + std::pow(rho, -2.0));
    const FMesh mesh =
        make_f_mesh(rho, alpha, tol_abs, delta, psi_offset, extra_break_factor);

    const double rho2 = rho * rho;
    const double expo = -(1.0 + alpha);
    const double center = delta > 0.0 ? chi_over_k2(rho2, delta) : 1.0 / rho2;

    auto integrand = [&](double r, double psi) {
        const double s = std::sin(0.5 * psi);
        const double c = std::cos(0.5 * psi);
        // |n − k|² in cancellation-free form.
        const double mm = (r - rho) * (r - rho) + 4.0 * rho * r * s * s;
        const double sin2 = 4.0 * s * s * c * c;
        const double kern = std::pow(1.0 + mm, expo);
        // |P⊥_{n−k} n|² = (k₁n₂ − k₂n₁)²/|n−k|² = r²ρ² sin²ψ / mm.
        const double proj = rho2 * r * r * sin2 / mm;
        const double radfac =
            delta > 0.0 ? chi_over_k2(r * r, delta) - center
                        : 1.0 / (r * r) - center;
        return r * kern * proj * radfac;  // trailing r: polar Jacobian
    };

    quad::QuadResult q = quad::integrate_2d(integrand, mesh.r_breaks,
                                            mesh.psi_breaks,
                                            0.9 * tol_abs, max_evals);
    if (!q.converged)
        throw quad::budget_error("coercivity quadrature budget exhausted");
    return q.value;
}

double bessel_j0(double x) { return std::cyl_bessel_j(0.0, x); }

// J₁(x)/x with its removable limit.
double j1_over_x(double x) {
    if (x < 1e-6) return 0.5 - x * x / 16.0;
    return std::cyl_bessel_j(1.0, x) / x;
}

// 1/2 − J₁(x)/x and 1/2 − J₀(x) + J₁(x)/x: the structure-function angular
// factors along / across z.  Series below x = 0.05 avoids cancellation.
double q_par_factor(double x) {
    if (x < 0.05) {
        const double x2 = x * x;
        return x2 / 16.0 - x2 * x2 / 384.0 + x2 * x2 * x2 / 18432.0;
    }
    return 0.5 - j1_over_x(x);
}

double q_perp_factor(double x) {
    if (x < 0.05) {
        const double x2 = x * x;
        return 3.0 * x2 / 16.0 - 5.0 * x2 * x2 / 384.0 +
               7.0 * x2 * x2 * x2 / 18432.0;
    }
    return 0.5 - bessel_j0(x) + j1_over_x(x);
}

// Shared radial quadrature for the rescaled-kernel reductions: integrates
// r·(λ²+r²)^{−1−α}·factor(r|z|) over (0, ∞), with half-period breaks for the
// Bessel oscillation and a doubled tail cut off by the decay bound.
double bessel_reduction(double alpha, double lambda, double zabs,
                        const std::function<double(double)>& factor,
                        double factor_bound, double tol_abs, long max_evals) {
    std::vector<double> breaks = {0.0};
    for (double m : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0})
        breaks.push_back(m * lambda);
    breaks.push_back(1.0);
    breaks.push_back(2.0);
    if (zabs > 0.0) {
        const double half_period = kPi / zabs;
        for (int j = 1; j <= 64; ++j) breaks.push_back(j * half_period);
    }

    const double share = 0.1 * tol_abs;
    double R = std::max({8.0 * lambda, 8.0, zabs > 0.0 ? 8.0 / zabs : 0.0});
    double tail = 0.0;
    for (int octave = 0; octave < 400; ++octave) {
        // Kernel bound r^{−2−2α}; Bessel amplitude bound min(1, √(2/(πx))).
        const double flat = std::pow(R, -2.0 * alpha) / (2.0 * alpha);
        const double osc =
            zabs > 0.0 ? std::sqrt(2.0 / (kPi * zabs)) *
                             std::pow(R, -0.5 - 2.0 * alpha) /
                             (0.5 + 2.0 * alpha)
                       : flat;
        tail = factor_bound * std::min(flat, osc);
        if (tail <= share) break;
        R *= 2.0;
        breaks.push_back(R);
    }
    if (tail > share)
        throw quad::budget_error("covariance tail cannot reach tolerance");

    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    std::vector<double> kept{0.0};
    for (double v : breaks)
        if (v > 0.0 && v <= R) kept.push_back(v);

    const double expo = -(1.0 + alpha);
    auto f = [&](double r) {
        return r * std::pow(lambda * lambda + r * r, expo) * factor(r * zabs);
    };
    quad::QuadResult q = quad::integrate_1d(f, kept, 0.9 * tol_abs, max_evals);
    if (!q.converged)
        throw quad::budget_error("covariance quadrature budget exhausted");
    return q.value;
}

Mat2 assemble(double par, double perp, double z1, double z2, double zabs) {
    // C = (C_∥ − C_⊥)·ẑẑᵀ + C_⊥·Id in the frame of ẑ = z/|z|.
    const double e1 = z1 / zabs, e2 = z2 / zabs;
    const double d = par - perp;
    return Mat2{{{d * e1 * e1 + perp, d * e1 * e2},
                 {d * e1 * e2, d * e2 * e2 + perp}}};
}

}  // namespace

double chi_delta_hat(double k_abs, double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("delta must lie in (0,1)");
    const double a = 4.0 * kPi * kPi * k_abs * k_abs;
    return std::exp(-a * delta) - std::exp(-a / delta);
}

double eval_F(double n1, double n2, double alpha, double tol, long max_evals) {
    return eval_f_impl(std::hypot(n1, n2), alpha, tol, 0.0, max_evals, 0.0,
                       0.0);
}

double eval_F_delta(double n1, double n2, double alpha, double delta,
                    double tol, long max_evals) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("delta must lie in (0,1)");
    return eval_f_impl(std::hypot(n1, n2), alpha, tol, delta, max_evals, 0.0,
                       0.0);
}

CoercivityProfile build_profile(double alpha, const std::vector<double>& radii,
                                double tol, long max_evals) {
    CoercivityProfile profile;
    profile.alpha = alpha;
    profile.quadrature_tolerance = tol;
    profile.samples.reserve(radii.size());
    for (double rho : radii) {
        const double tol_abs =
            tol * (std::pow(rho, -2.0 * alpha) + std::pow(rho, -2.0));
        CoercivitySample s;
        s.rho = rho;
        s.tol_abs = tol_abs;
        try {
            s.value = eval_f_impl(rho, alpha, tol, 0.0, max_evals, 0.0, 0.0);
            // Second direction, deliberately different mesh (rotated angular
            // anchor, extra radial break): isotropy + self-consistency witness.
            s.cross =
                eval_f_impl(rho, alpha, tol, 0.0, max_evals, kPi / 8.0, 1.3);
        } catch (const quad::budget_error& e) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", rho);
            throw quad::budget_error(std::string(e.what()) +
                                     " at radius |n| = " + buf);
        }
        if (std::abs(s.value - s.cross) > 2.0 * tol_abs)
            throw std::runtime_error(
                "coercivity isotropy check failed: directions disagree "
                "beyond 2x quadrature tolerance");
        profile.samples.push_back(s);
    }
    return profile;
}

KappaFit fit_kappas(const CoercivityProfile& profile) {
    const auto& samples = profile.samples;
    if (samples.size() < 3)
        throw std::invalid_argument("kappa fit needs at least 3 samples");
    double rho_min = samples.front().rho, rho_max = samples.front().rho;
    for (const auto& s : samples) {
        rho_min = std::min(rho_min, s.rho);
        rho_max = std::max(rho_max, s.rho);
    }
    if (rho_max < 999.0 * rho_min)
        throw std::invalid_argument(
            "kappa fit requires a profile spanning >= 3 decades of |n|");

    const double alpha = profile.alpha;
    const double two_alpha = 2.0 * alpha;

    double kappa_hi = 0.0;
    for (const auto& s : samples)
        kappa_hi = std::max(kappa_hi, -s.value * std::pow(s.rho, two_alpha));
    if (!(kappa_hi > 0.0))
        throw std::runtime_error(
            "no positive kappa1 admissible: F is nonnegative on all samples");
    kappa_hi *= 2.0;

    // Outer-half domination scale: κ₂|n|^{−2} must stay below half of
    // κ₁|n|^{−2α} for every sampled radius past the geometric midpoint,
    // otherwise the fitted bound is vacuous at the radii that matter.
    const double rho_mid = std::sqrt(rho_min * rho_max);
    double dom = std::numeric_limits<double>::infinity();
    for (const auto& s : samples)
        if (s.rho >= rho_mid)
            dom = std::min(dom, std::pow(s.rho, 2.0 - two_alpha));

    constexpr int kSweep = 4096;
    for (int i = 0; i < kSweep; ++i) {
        const double kappa1 =
            kappa_hi * std::pow(1e-6, double(i) / double(kSweep - 1));
        double kappa2 = 0.0;
        for (const auto& s : samples)
            kappa2 = std::max(kappa2, (s.value + kappa1 * std::pow(s.rho,
                                                                   -two_alpha)) *
                                          s.rho * s.rho);
        if (kappa2 <= 0.0) kappa2 = 1e-12 * kappa1;
        if (kappa2 <= 0.5 * kappa1 * dom) {
            KappaFit fit;
            fit.kappa1 = kappa1;
            fit.kappa2 = kappa2;
            fit.rho_min = rho_min;
            fit.rho_max = rho_max;
            double slack = std::numeric_limits<double>::infinity();
            for (const auto& s : samples)
                slack = std::min(
                    slack, -kappa1 * std::pow(s.rho, -two_alpha) +
                               kappa2 * std::pow(s.rho, -2.0) - s.value);
            fit.residual = std::max(0.0, slack);
            return fit;
        }
    }
    throw std::runtime_error("no positive kappa1 admissible within the sweep");
}

Mat2 scaling_covariance(double alpha, double lambda, double z1, double z2,
                        double tol) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("alpha must lie in (0,1)");
    const double c0 = std::pow(lambda, -2.0 * alpha) / (4.0 * alpha);
    const double zabs = std::hypot(z1, z2);
    if (zabs == 0.0) return Mat2{{{c0, 0.0}, {0.0, c0}}};

    const double tol_abs = tol * c0;
    const long budget = 40'000'000;
    const double par = bessel_reduction(alpha, lambda, zabs, j1_over_x, 0.5,
                                        tol_abs, budget);
    const double perp = bessel_reduction(
        alpha, lambda, zabs,
        [](double x) { return bessel_j0(x) - j1_over_x(x); }, 1.5, tol_abs,
        budget);
    return assemble(par, perp, z1, z2, zabs);
}

Mat2 structure_scaling(double alpha, double lambda, double z1, double z2,
                       double tol) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("alpha must lie in (0,1)");
    const double zabs = std::hypot(z1, z2);
    if (zabs == 0.0) return Mat2{{{0.0, 0.0}, {0.0, 0.0}}};

    // Q ~ |z|^{2α} below the kernel scale, saturating at 2·c₀^λ above it.
    const double c0 = std::pow(lambda, -2.0 * alpha) / (4.0 * alpha);
    const double scale =
        std::min(std::pow(zabs, 2.0 * alpha) / (2.0 * alpha), 2.0 * c0);
    const double tol_abs = tol * scale;
    const long budget = 40'000'000;
    const double par = bessel_reduction(alpha, lambda, zabs, q_par_factor, 1.0,
                                        tol_abs, budget);
    const double perp = bessel_reduction(alpha, lambda, zabs, q_perp_factor,
                                         2.0, tol_abs, budget);
    return assemble(par, perp, z1, z2, zabs);
}

}  // namespace kgsq
