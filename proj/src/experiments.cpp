#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "field_ops.hpp"
#include "rng.hpp"

namespace kgsq {

Stat summarize(const std::vector<double>& xs) {
    Stat s;
    const std::size_t n = xs.size();
    if (n == 0) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / double(n);
    if (n > 1) {
        double aq = 0.0;
        for (double x : xs) aq += (x - s.mean) * (x - s.mean);
        s.se = std::sqrt(aq / double(n - 1) / double(n));
    }
    return s;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("slope fit needs >= 2 matched points");
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw std::invalid_argument("slope fit needs positive data");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double den = double(n) * sxx - sx * sx;
    return (double(n) * sxy - sx * sy) / den;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::mutex mu;
    std::exception_ptr first_error;
    std::vector<std::thread> pool;
    const int block = (n + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
        const int lo = w * block;
        const int hi = std::min(n, lo + block);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            try {
                for (int i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

namespace {

// Per-realization output of the viscosity ladder study.
struct LadderSlot {
    bool ok = false;
    // h1sq[pair][step index]: ‖ξ‖²_{Ḣ^{−1}} along the trajectory
    std::vector<std::vector<double>> h1sq;
    std::vector<double> integral;  // per pair: ∫‖ξ‖²_{Ḣ^{−α}} dt (trapezoid)
};

}  // namespace

RateStudy run_vanishing_viscosity(const ModelParams& params,
                                  const NoiseModel& noise,
                                  const SpectralField& datum,
                                  const std::vector<double>& ladder,
                                  int ensemble, std::uint64_t seed,
                                  double t_end, const StepScheme& scheme,
                                  int threads) {
    if (ladder.empty()) throw std::invalid_argument("empty viscosity ladder");
    for (std::size_t j = 0; j + 1 < ladder.size(); ++j)
        if (!(ladder[j] > ladder[j + 1]) || !(ladder[j + 1] > 0.0))
            throw std::invalid_argument("ladder must be positive and decreasing");
    if (ensemble < 1) throw std::invalid_argument("ensemble must be >= 1");
    if (!scheme.noise_enabled)
        throw std::invalid_argument("the rate study requires transport noise");

    RateStudy study;
    study.ladder = ladder;
    study.ensemble = ensemble;
    study.low_ensemble = ensemble < kEnsembleFloor;
    const int npairs = int(ladder.size()) - 1;
    const long nsteps = std::lround(t_end / scheme.dt);

    std::vector<LadderSlot> slots(ensemble);
    const Grid grid(params.N, params.L);

    parallel_for(ensemble, threads, [&](int r) {
        LadderSlot& out = slots[r];
        out.h1sq.assign(npairs, std::vector<double>(nsteps + 1, 0.0));
        out.integral.assign(npairs, 0.0);

        const std::uint64_t rseed = rng::subseed(seed, std::uint64_t(r));
        std::vector<std::unique_ptr<Solver>> runs;
        runs.reserve(ladder.size());
        for (double nu : ladder) {
            ModelParams pj = params;
            pj.nu = nu;
            runs.push_back(std::make_unique<Solver>(pj, &noise, rseed, scheme));
            runs.back()->set_theta(datum);
        }

        SpectralField xi(grid);
        std::vector<double> prev_ha(npairs, 0.0);  // ξ₀ = 0 on every pair
        out.ok = true;
        for (long k = 1; k <= nsteps; ++k) {
            for (auto& run : runs) {
                if (run->step() != StepStatus::ok) {
                    out.ok = false;
                    return;
                }
            }
            for (int j = 0; j < npairs; ++j) {
                xi = runs[j]->theta();
                xi -= runs[j + 1]->theta();
                const double h1 = sobolev_norm(xi, -1.0);
                const double ha = sobolev_norm(xi, -params.alpha);
                out.h1sq[j][k] = h1 * h1;
                out.integral[j] += 0.5 * scheme.dt * (prev_ha[j] + ha * ha);
                prev_ha[j] = ha * ha;
            }
        }
    });

    int done = 0;
    for (const auto& s : slots)
        if (s.ok) ++done;
    study.ensemble_done = done;
    study.complete = done == ensemble;
    if (!study.complete) study.note = "incomplete: blow-up guard tripped";
    if (done == 0) {
        study.note = "no completed realizations";
        return study;
    }

    for (int j = 0; j < npairs; ++j) {
        RateRung rung;
        rung.nu_hi = ladder[j];
        rung.nu_lo = ladder[j + 1];

        // sup over t of the ensemble-mean curve; SE taken at the argmax time.
        long best_k = 0;
        double best_mean = 0.0;
        for (long k = 0; k <= nsteps; ++k) {
            double m = 0.0;
            for (const auto& s : slots)
                if (s.ok) m += s.h1sq[j][k];
            m /= double(done);
            if (m >= best_mean) {
                best_mean = m;
                best_k = k;
            }
        }
        std::vector<double> at_best;
        std::vector<double> integrals;
        at_best.reserve(done);
        integrals.reserve(done);
        for (const auto& s : slots) {
            if (!s.ok) continue;
            at_best.push_back(s.h1sq[j][best_k]);
            integrals.push_back(s.integral[j]);
        }
        rung.sup_h_m1_sq = summarize(at_best);
        rung.int_h_malpha_sq = summarize(integrals);
        study.rungs.push_back(rung);
    }

    if (npairs >= 2) {
        std::vector<double> xs, ys;
        for (const auto& rung : study.rungs) {
            if (rung.sup_h_m1_sq.mean > 0.0) {
                xs.push_back(rung.nu_hi);
                ys.push_back(std::sqrt(rung.sup_h_m1_sq.mean));
            }
        }
        if (xs.size() >= 2) {
            study.slope = loglog_slope(xs, ys);
            study.slope_defined = true;
        }
    }
    if (!study.slope_defined && study.note.empty())
        study.note = "insufficient rungs";
    return study;
}

namespace {

struct StabilitySlot {
    bool ok = false;
    std::vector<double> h1sq;
    double integral = 0.0;
    bool exact_zero = true;
};

}  // namespace

StabilityReport run_stability(const ModelParams& params,
                              const NoiseModel& noise,
                              const SpectralField& datum1,
                              const SpectralField& datum2, int ensemble,
                              std::uint64_t seed, double t_end,
                              const StepScheme& scheme, int threads) {
    if (ensemble < 1) throw std::invalid_argument("ensemble must be >= 1");
    StabilityReport report;
    report.ensemble = ensemble;
    report.low_ensemble = ensemble < kEnsembleFloor;
    const long nsteps = std::lround(t_end / scheme.dt);
    const Grid grid(params.N, params.L);

    std::vector<StabilitySlot> slots(ensemble);
    parallel_for(ensemble, threads, [&](int r) {
        StabilitySlot& out = slots[r];
        out.h1sq.assign(nsteps + 1, 0.0);

        const std::uint64_t rseed = rng::subseed(seed, std::uint64_t(r));
        Solver run1(params, &noise, rseed, scheme);
        Solver run2(params, &noise, rseed, scheme);
        run1.set_theta(datum1);
        run2.set_theta(datum2);

        SpectralField xi(grid);
        double prev_ha = 0.0;
        {
            xi = run1.theta();
            xi -= run2.theta();
            const double h1 = sobolev_norm(xi, -1.0);
            const double ha = sobolev_norm(xi, -params.alpha);
            out.h1sq[0] = h1 * h1;
            out.exact_zero = out.exact_zero && h1 * h1 == 0.0;
            prev_ha = ha * ha;
        }
        out.ok = true;
        for (long k = 1; k <= nsteps; ++k) {
            if (run1.step() != StepStatus::ok || run2.step() != StepStatus::ok) {
                out.ok = false;
                return;
            }
            xi = run1.theta();
            xi -= run2.theta();
            const double h1 = sobolev_norm(xi, -1.0);
            const double ha = sobolev_norm(xi, -params.alpha);
            out.h1sq[k] = h1 * h1;
            out.exact_zero = out.exact_zero && h1 * h1 == 0.0;
            out.integral += 0.5 * scheme.dt * (prev_ha + ha * ha);
            prev_ha = ha * ha;
        }
    });

    int done = 0;
    for (const auto& s : slots)
        if (s.ok) ++done;
    report.ensemble_done = done;
    report.complete = done == ensemble;
    if (done == 0) return report;

    report.identical = true;
    std::vector<double> integrals;
    integrals.reserve(done);
    for (const auto& s : slots) {
        if (!s.ok) continue;
        report.identical = report.identical && s.exact_zero;
        integrals.push_back(s.integral);
    }
    report.dissipation = summarize(integrals);

    report.times.resize(nsteps + 1);
    report.xi_h_m1_sq.resize(nsteps + 1);
    std::vector<double> vals;
    for (long k = 0; k <= nsteps; ++k) {
        report.times[k] = double(k) * scheme.dt;
        vals.clear();
        for (const auto& s : slots)
            if (s.ok) vals.push_back(s.h1sq[k]);
        report.xi_h_m1_sq[k] = summarize(vals);
    }
    report.xi0_h_m1_sq = report.xi_h_m1_sq.empty() ? 0.0
                                                   : report.xi_h_m1_sq[0].mean;

    // Smallest C with mean(t) ≤ e^{Ct}·mean(0) at every recorded time.
    if (report.xi0_h_m1_sq > 0.0) {
        double c = -std::numeric_limits<double>::infinity();
        for (long k = 1; k <= nsteps; ++k) {
            const double m = report.xi_h_m1_sq[k].mean;
            if (m > 0.0)
                c = std::max(c, std::log(m / report.xi0_h_m1_sq) /
                                    report.times[k]);
        }
        report.envelope_c = std::isfinite(c) ? c : 0.0;
    }
    return report;
}

namespace {

// Hypothesis checks of the trilinear bound, returning (p⋆, r₁, r₂).
std::array<double, 3> trilinear_exponents(const ModelParams& params) {
    params.check();
    const double alpha = params.alpha, beta = params.beta, p = params.p;
    if (alpha + beta > 1.0 + 1e-12)
        throw std::invalid_argument("trilinear hypotheses need alpha+beta <= 1");
    if (alpha + 0.5 * beta > 1.0 - 1.0 / p + 1e-12)
        throw std::invalid_argument(
            "trilinear hypotheses need alpha+beta/2 <= 1-1/p");
    const double p_star = critical_exponent(alpha, beta);
    if (p < p_star - 1e-12)
        throw std::invalid_argument("trilinear exponents need p >= p_star");
    const double r1 = 1.0 - p_star / p;
    const double r2 = (1.0 - alpha - beta) / (1.0 - alpha) * r1;
    return {p_star, r1, r2};
}

}  // namespace

TrilinearTerms trilinear_terms(const SpectralField& xi,
                               const SpectralField& phi,
                               const SpectralField& theta,
                               const ModelParams& params) {
    const std::array<double, 3> ex = trilinear_exponents(params);
    const double alpha = params.alpha, beta = params.beta, p = params.p;
    const Grid& grid = xi.grid();
    if (!phi.grid().same(grid) || !theta.grid().same(grid))
        throw std::invalid_argument("trilinear fields must share a grid");

    // Vector legs of the pairings (overall signs drop in |·|).
    const VectorField A = velocity_from_scalar(xi, 0.0);
    const VectorField B = velocity_from_scalar(theta, 0.0);
    const VectorField V = velocity_from_scalar(phi, beta);
    const VectorField Vt = velocity_from_scalar(theta, beta);

    RealField ax(grid), ay(grid), vx(grid), vy(grid), wx(grid), wy(grid);
    to_physical(A.x, ax);
    to_physical(A.y, ay);
    to_physical(V.x, vx);
    to_physical(V.y, vy);
    to_physical(Vt.x, wx);
    to_physical(Vt.y, wy);

    auto jacobian = [&](const VectorField& f, RealField& d11, RealField& d12,
                        RealField& d21, RealField& d22) {
        to_physical(derivative(f.x, 0), d11);
        to_physical(derivative(f.x, 1), d12);
        to_physical(derivative(f.y, 0), d21);
        to_physical(derivative(f.y, 1), d22);
    };
    RealField b11(grid), b12(grid), b21(grid), b22(grid);
    RealField a11(grid), a12(grid), a21(grid), a22(grid);
    jacobian(B, b11, b12, b21, b22);
    jacobian(A, a11, a12, a21, a22);

    double l1 = 0.0, l2 = 0.0, l3 = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i) {
        const double Ax = ax.data()[i], Ay = ay.data()[i];
        const double Vx = vx.data()[i], Vy = vy.data()[i];
        const double Wx = wx.data()[i], Wy = wy.data()[i];
        // (V·∇)B then (∇B)ᵀV then (∇A)ᵀVt, contracted against A.
        l1 += Ax * (Vx * b11.data()[i] + Vy * b12.data()[i]) +
              Ay * (Vx * b21.data()[i] + Vy * b22.data()[i]);
        l2 += Ax * (Vx * b11.data()[i] + Vy * b21.data()[i]) +
              Ay * (Vx * b12.data()[i] + Vy * b22.data()[i]);
        l3 += Ax * (Wx * a11.data()[i] + Wy * a21.data()[i]) +
              Ay * (Wx * a12.data()[i] + Wy * a22.data()[i]);
    }
    const double cell = grid.cell_area();
    l1 = std::abs(l1) * cell;
    l2 = std::abs(l2) * cell;
    l3 = std::abs(l3) * cell;

    const double xia = sobolev_norm(xi, -alpha);
    const double xi1 = sobolev_norm(xi, -1.0);
    const double pha = sobolev_norm(phi, -alpha);
    const double ph1 = sobolev_norm(phi, -1.0);
    RealField thp(grid);
    to_physical(theta, thp);
    const double tlp = lebesgue_norm(thp, p);

    const double r1 = ex[1], r2 = ex[2];
    const double rhs12 = std::pow(xia, 1.0 - r1) * std::pow(xi1, r1) *
                         std::pow(pha, 1.0 - r2) * std::pow(ph1, r2) * tlp;
    const double rhs3 = std::pow(xia, 2.0 - r1 - r2) *
                        std::pow(xi1, r1 + r2) * tlp;

    TrilinearTerms out;
    out.lhs = {l1, l2, l3};
    out.rhs = {rhs12, rhs12, rhs3};
    return out;
}

TrilinearReport trilinear_ratios(const ModelParams& params, int samples,
                                 std::uint64_t seed, int threads) {
    const std::array<double, 3> ex = trilinear_exponents(params);
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");

    TrilinearReport report;
    report.alpha = params.alpha;
    report.beta = params.beta;
    report.p = params.p;
    report.p_star = ex[0];
    report.r1 = ex[1];
    report.r2 = ex[2];
    report.samples = samples;
    report.ratios.assign(samples, {0.0, 0.0, 0.0});

    const Grid grid(params.N, params.L);
    const double band = grid.dealias_m() * grid.dk();

    parallel_for(samples, threads, [&](int s) {
        const std::uint64_t sseed = rng::subseed(seed, std::uint64_t(s));
        // One fixed spectral class (full dealiased band, slope -1) with
        // fresh phases per draw: the max/median tail statistic only means
        // something when the samples are exchangeable.
        auto make_field = [&](int which) {
            return random_bandlimited(grid, rng::chain(sseed, which), grid.dk(),
                                      band, -1.0, 1.0);
        };
        const SpectralField xi = make_field(0);
        const SpectralField phi = make_field(1);
        const SpectralField th = make_field(2);
        const TrilinearTerms t = trilinear_terms(xi, phi, th, params);
        report.ratios[s] = {t.lhs[0] / t.rhs[0], t.lhs[1] / t.rhs[1],
                            t.lhs[2] / t.rhs[2]};
    });

    for (int c = 0; c < 3; ++c) {
        std::vector<double> col(samples);
        for (int s = 0; s < samples; ++s) col[s] = report.ratios[s][c];
        report.max_ratio[c] = *std::max_element(col.begin(), col.end());
        std::nth_element(col.begin(), col.begin() + samples / 2, col.end());
        report.median_ratio[c] = col[samples / 2];
    }
    return report;
}

namespace {

// Zero-pad a spectral field onto a finer grid (same torus length).
SpectralField pad_to(const SpectralField& src, const Grid& big) {
    SpectralField dst(big);
    const Grid& g = src.grid();
    for (int row = 0; row < g.n; ++row) {
        if (row == g.nyquist()) continue;  // kept zero by the invariants
        const int m1 = g.m_of_row(row);
        for (int col = 0; col < g.half() - 1; ++col)
            dst.raw(big.row_of_m(m1), col) = src.raw(row, col);
    }
    dst.set_mean(src.mean());
    return dst;
}

}  // namespace

double residual_weak_form(const std::vector<SpectralField>& theta_series,
                          const SpectralField& test_function,
                          const ModelParams& params, const NoiseModel* noise,
                          const BrownianDriver& driver, double dt) {
    if (theta_series.size() < 2)
        throw std::invalid_argument("need at least two recorded states");
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    const Grid& g = theta_series.front().grid();
    for (const auto& th : theta_series)
        if (!th.grid().same(g))
            throw std::invalid_argument("series grids disagree");

    SpectralField phi = test_function;
    phi.dealias();
    phi.set_mean(0.0);
    phi.zero_nyquist();

    const Grid big(2 * g.n, g.length);
    const SpectralField phi_big = pad_to(phi, big);
    RealField dphi1(big), dphi2(big);
    to_physical(derivative(phi_big, 0), dphi1);
    to_physical(derivative(phi_big, 1), dphi2);

    const double rate =
        (noise != nullptr ? 0.5 * noise->corrector_c0() : 0.0) + params.nu;
    const std::size_t last = theta_series.size() - 1;

    // ⟨θ, Δφ⟩ is diagonal: no padding needed.
    auto diffusion_pairing = [&](const SpectralField& th) {
        double sum = 0.0;
        for (int row = 0; row < g.n; ++row) {
            const double k1 = g.k1(row);
            for (int col = 0; col < g.half(); ++col) {
                const double k2 = g.k2(col);
                const double w = (col == 0 || col == g.nyquist()) ? 1.0 : 2.0;
                const cplx a = th.raw(row, col);
                const cplx b = phi.raw(row, col);
                sum -= w * (k1 * k1 + k2 * k2) *
                       (a.real() * b.real() + a.imag() * b.imag());
            }
        }
        return sum * g.length * g.length;
    };

    // ⟨θ, v·∇φ⟩ with the product formed alias-free on the doubled grid.
    RealField w1(big), w2(big), prod(big);
    SpectralField what(big);
    auto transport_pairing = [&](const SpectralField& th,
                                 const SpectralField& vx,
                                 const SpectralField& vy) {
        to_physical(pad_to(vx, big), w1);
        to_physical(pad_to(vy, big), w2);
        for (std::size_t i = 0; i < prod.size(); ++i)
            prod.data()[i] = w1.data()[i] * dphi1.data()[i] +
                             w2.data()[i] * dphi2.data()[i];
        to_spectral(prod, what);
        return l2_inner(pad_to(th, big), what);
    };

    double adv = 0.0, sto = 0.0, dif = 0.0;
    VectorField dw(g);
    for (std::size_t k = 0; k < last; ++k) {
        const SpectralField& th = theta_series[k];
        SpectralField thd = th;
        thd.dealias();
        thd.set_mean(0.0);
        const VectorField u = velocity_from_scalar(thd, params.beta);
        adv += dt * transport_pairing(th, u.x, u.y);
        dif += dt * rate * diffusion_pairing(th);
        if (noise != nullptr) {
            sample_increment(*noise, driver, std::uint64_t(k), dt, dw);
            sto += transport_pairing(th, dw.x, dw.y);
        }
    }

    const double t_final = l2_inner(theta_series[last], phi);
    const double t_initial = l2_inner(theta_series[0], phi);
    const double lhs = t_final - t_initial;
    const double defect = std::abs(lhs - adv - sto - dif);
    const double scale =
        std::max({std::abs(lhs), std::abs(adv), std::abs(sto), std::abs(dif)});
    if (scale == 0.0) return 0.0;
    return defect / scale;
}

}  // namespace kgsq
