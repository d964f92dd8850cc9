#include "solver.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "field_ops.hpp"

namespace kgsq {

namespace {

// û = −∇⊥Λ^{β−2}θ̂ written straight into (vx, vy); divergence-free because
// k·(k₂,−k₁) = 0 mode by mode.
void velocity_hat(const SpectralField& th, double beta, SpectralField& vx,
                  SpectralField& vy) {
    const Grid& g = th.grid();
    const int nyq = g.nyquist();
    const double e = 0.5 * (beta - 2.0);
    const cplx* src = th.data();
    cplx* px = vx.data();
    cplx* py = vy.data();
    for (int row = 0; row < g.n; ++row) {
        const double k1 = g.k1(row);
        const bool dead_row = row == nyq;
        for (int col = 0; col < g.half(); ++col) {
            const int idx = g.at(row, col);
            const double k2 = g.k2(col);
            const double ksq = k1 * k1 + k2 * k2;
            if (ksq == 0.0 || dead_row || col == nyq) {
                px[idx] = 0.0;
                py[idx] = 0.0;
                continue;
            }
            const double m = std::pow(ksq, e);
            const cplx it(-src[idx].imag(), src[idx].real());  // i·θ̂
            px[idx] = (k2 * m) * it;
            py[idx] = -(k1 * m) * it;
        }
    }
}

// (∂₁θ, ∂₂θ) via ik multipliers, Nyquist row/column dropped.
void gradient_hat(const SpectralField& th, SpectralField& dx,
                  SpectralField& dy) {
    const Grid& g = th.grid();
    const int nyq = g.nyquist();
    const cplx* src = th.data();
    cplx* p1 = dx.data();
    cplx* p2 = dy.data();
    for (int row = 0; row < g.n; ++row) {
        const double k1 = g.k1(row);
        const bool dead_row = row == nyq;
        for (int col = 0; col < g.half(); ++col) {
            const int idx = g.at(row, col);
            if (dead_row || col == nyq) {
                p1[idx] = 0.0;
                p2[idx] = 0.0;
                continue;
            }
            const double k2 = g.k2(col);
            const cplx it(-src[idx].imag(), src[idx].real());
            p1[idx] = k1 * it;
            p2[idx] = k2 * it;
        }
    }
}

}  // namespace

SpectralField nonlinearity_standard(const SpectralField& theta, double beta) {
    const Grid& g = theta.grid();
    SpectralField th = theta;
    th.dealias();
    th.set_mean(0.0);

    SpectralField ax(g), ay(g);
    RealField u1(g), u2(g), g1(g), g2(g), prod(g);
    velocity_hat(th, beta, ax, ay);
    to_physical(ax, u1);
    to_physical(ay, u2);
    gradient_hat(th, ax, ay);
    to_physical(ax, g1);
    to_physical(ay, g2);
    for (std::size_t i = 0; i < prod.size(); ++i)
        prod.data()[i] = u1.data()[i] * g1.data()[i] + u2.data()[i] * g2.data()[i];

    SpectralField out(g);
    to_spectral(prod, out);
    out.dealias();
    out.zero_nyquist();
    out.set_mean(0.0);
    return out;
}

SpectralField nonlinearity_momentum(const SpectralField& theta, double beta) {
    const Grid& g = theta.grid();
    SpectralField th = theta;
    th.dealias();
    th.set_mean(0.0);

    SpectralField ta(g), tb(g);
    RealField u1(g), u2(g);
    velocity_hat(th, beta, ta, tb);
    to_physical(ta, u1);
    to_physical(tb, u2);

    // h = −∇⊥Λ^{−2}θ (the β = 0 stream form), then its full Jacobian.
    SpectralField hx(g), hy(g);
    velocity_hat(th, 0.0, hx, hy);
    RealField d11(g), d12(g), d21(g), d22(g);
    gradient_hat(hx, ta, tb);
    to_physical(ta, d11);  // ∂₁ h_x
    to_physical(tb, d12);  // ∂₂ h_x
    gradient_hat(hy, ta, tb);
    to_physical(ta, d21);  // ∂₁ h_y
    to_physical(tb, d22);  // ∂₂ h_y

    // A = (u·∇)h − (∇h)ᵀu, both terms spelled out; the cancellation between
    // them is the content of the momentum identity and is left to the
    // floating point arithmetic on purpose.
    RealField a1(g), a2(g);
    for (std::size_t i = 0; i < a1.size(); ++i) {
        const double adv_x = u1.data()[i] * d11.data()[i] + u2.data()[i] * d12.data()[i];
        const double adv_y = u1.data()[i] * d21.data()[i] + u2.data()[i] * d22.data()[i];
        const double grad_x = u1.data()[i] * d11.data()[i] + u2.data()[i] * d21.data()[i];
        const double grad_y = u1.data()[i] * d12.data()[i] + u2.data()[i] * d22.data()[i];
        a1.data()[i] = adv_x - grad_x;
        a2.data()[i] = adv_y - grad_y;
    }
    to_spectral(a1, ta);
    to_spectral(a2, tb);

    // ∇⊥·A = −∂₂A_x + ∂₁A_y
    SpectralField out(g);
    const int nyq = g.nyquist();
    for (int row = 0; row < g.n; ++row) {
        const double k1 = g.k1(row);
        const bool dead_row = row == nyq;
        for (int col = 0; col < g.half(); ++col) {
            const int idx = g.at(row, col);
            if (dead_row || col == nyq) {
                out.data()[idx] = 0.0;
                continue;
            }
            const double k2 = g.k2(col);
            const cplx iax(-ta.data()[idx].imag(), ta.data()[idx].real());
            const cplx iay(-tb.data()[idx].imag(), tb.data()[idx].real());
            out.data()[idx] = -k2 * iax + k1 * iay;
        }
    }
    out.dealias();
    out.zero_nyquist();
    out.set_mean(0.0);
    return out;
}

SpectralField approximate_datum(const SpectralField& f, double epsilon,
                                double p) {
    const Grid& g = f.grid();
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (!(p > 1.0)) throw std::invalid_argument("p must exceed 1");
    if (2.0 / epsilon > 0.5 * g.length)
        throw std::invalid_argument(
            "epsilon too small: cutoff radius 2/epsilon exceeds half the torus");
    if (std::abs(f.mean()) > 1e-12)
        throw std::invalid_argument("datum must be mean-free");

    // Far field routed through the Laplacian: grad of g = Λ^{−2}f.
    SpectralField pot = fractional_laplacian(f, -2.0);
    SpectralField ta = derivative(pot, 0);
    SpectralField tb = derivative(pot, 1);
    RealField gx(g), gy(g);
    to_physical(ta, gx);
    to_physical(tb, gy);

    // ψ^ε(x) = ψ(ε·dist(x, center)): 1 inside radius 1/ε, 0 outside 2/ε,
    // glued by the standard exp(−1/t) partition.
    const double cx = 0.5 * g.length, cy = 0.5 * g.length;
    auto bump = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
    RealField psi(g);
    for (int i1 = 0; i1 < g.n; ++i1) {
        double dxs = std::abs(i1 * g.dx() - cx);
        dxs = std::min(dxs, g.length - dxs);
        for (int i2 = 0; i2 < g.n; ++i2) {
            double dys = std::abs(i2 * g.dx() - cy);
            dys = std::min(dys, g.length - dys);
            const double s = epsilon * std::hypot(dxs, dys);
            if (s <= 1.0)
                psi(i1, i2) = 1.0;
            else if (s >= 2.0)
                psi(i1, i2) = 0.0;
            else {
                const double up = bump(2.0 - s);
                psi(i1, i2) = up / (up + bump(s - 1.0));
            }
        }
    }

    RealField px(g), py(g);
    pointwise_product(psi, gx, px);
    pointwise_product(psi, gy, py);
    to_spectral(px, ta);
    to_spectral(py, tb);

    // f̃ = −∇·(ψ ∇Λ^{−2} f), then the Gaussian mollifier of width ε.
    SpectralField out(g);
    const int nyq = g.nyquist();
    for (int row = 0; row < g.n; ++row) {
        const double k1 = g.k1(row);
        const bool dead_row = row == nyq;
        for (int col = 0; col < g.half(); ++col) {
            const int idx = g.at(row, col);
            if (dead_row || col == nyq) {
                out.data()[idx] = 0.0;
                continue;
            }
            const double k2 = g.k2(col);
            const double ksq = k1 * k1 + k2 * k2;
            const cplx div_i(-ta.data()[idx].imag() * k1 - tb.data()[idx].imag() * k2,
                             ta.data()[idx].real() * k1 + tb.data()[idx].real() * k2);
            out.data()[idx] = -std::exp(-0.5 * epsilon * epsilon * ksq) * div_i;
        }
    }
    out.set_mean(0.0);
    out.zero_nyquist();
    return out;
}

Solver::Solver(const ModelParams& params, const NoiseModel* noise,
               std::uint64_t noise_seed, const StepScheme& scheme)
    : grid_(params.N, params.L),
      params_(params),
      scheme_(scheme),
      noise_(scheme.noise_enabled ? noise : nullptr),
      driver_(noise_seed),
      theta_(grid_),
      sa_(grid_),
      sb_(grid_),
      nhat_(grid_),
      xhat_(grid_),
      next_(grid_),
      dw_(grid_),
      u1_(grid_),
      u2_(grid_),
      g1_(grid_),
      g2_(grid_),
      w1_(grid_),
      w2_(grid_),
      prod_(grid_) {
    params_.check();
    if (!(scheme_.dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (scheme_.noise_enabled && noise == nullptr)
        throw std::invalid_argument("noise enabled but no noise model given");
    if (noise_ != nullptr && !noise_->grid().same(grid_))
        throw std::invalid_argument("noise model grid mismatch");
    c0_ = noise_ != nullptr ? noise_->corrector_c0() : 0.0;

    diffusion_.resize(grid_.spec_size());
    noise_gain_.resize(grid_.spec_size());
    const double rate = 0.5 * c0_ + params_.nu;
    for (int row = 0; row < grid_.n; ++row) {
        const double k1 = grid_.k1(row);
        for (int col = 0; col < grid_.half(); ++col) {
            const double k2 = grid_.k2(col);
            const double x = rate * (k1 * k1 + k2 * k2) * scheme_.dt;
            diffusion_[grid_.at(row, col)] = std::exp(-x);
            // Exact variance of the stochastic convolution over one step:
            // 2x·gain² = 1−e^{−2x}, so in expectation the multiplier drains
            // per mode exactly what the weighted increment injects, at every
            // wavenumber.  Damping the raw increment by e^{−x} instead loses
            // an O(1) fraction of the injected energy wherever x ≳ 1.
            noise_gain_[grid_.at(row, col)] =
                x < 1e-12 ? 1.0 : std::sqrt(-std::expm1(-2.0 * x) / (2.0 * x));
        }
    }
}

void Solver::set_theta(const SpectralField& datum) {
    if (!datum.grid().same(grid_))
        throw std::invalid_argument("datum grid mismatch");
    theta_ = datum;
    theta_.set_mean(0.0);
    theta_.zero_nyquist();
    t_ = 0.0;
    step_ = 0;
    last_max_u_ = 0.0;
    sup_max_u_ = 0.0;
}

StepStatus Solver::step() { return step_internal(); }

StepStatus Solver::step_internal() {
    const double dt = scheme_.dt;

    // Drift nonlinearity from the dealiased field.
    sa_ = theta_;
    sa_.dealias();
    sa_.set_mean(0.0);
    velocity_hat(sa_, params_.beta, sb_, nhat_);
    to_physical(sb_, u1_);
    to_physical(nhat_, u2_);
    last_max_u_ = max_speed(u1_, u2_);
    sup_max_u_ = std::max(sup_max_u_, last_max_u_);
    if (dt * last_max_u_ * grid_.n / grid_.length > scheme_.cfl_max)
        return StepStatus::cfl_violation;

    gradient_hat(sa_, sb_, nhat_);
    to_physical(sb_, g1_);
    to_physical(nhat_, g2_);
    for (std::size_t i = 0; i < prod_.size(); ++i)
        prod_.data()[i] =
            u1_.data()[i] * g1_.data()[i] + u2_.data()[i] * g2_.data()[i];
    to_spectral(prod_, nhat_);
    nhat_.dealias();
    nhat_.zero_nyquist();
    nhat_.set_mean(0.0);

    // Transport noise increment ΔW·∇θ against the full-band gradient.  The
    // product is kept pointwise (no output truncation): on the grid this
    // keeps E‖ΔW·∇θ‖²_{L²} = dt·c₀‖∇θ‖²_{L²} exactly, which is what the
    // corrector multiplier drains — truncating here would leave a
    // dt-independent energy leak.
    if (noise_ != nullptr) {
        sample_increment(*noise_, driver_, step_, dt, dw_);
        to_physical(dw_.x, w1_);
        to_physical(dw_.y, w2_);
        gradient_hat(theta_, sa_, sb_);
        to_physical(sa_, g1_);
        to_physical(sb_, g2_);
        for (std::size_t i = 0; i < prod_.size(); ++i)
            prod_.data()[i] =
                w1_.data()[i] * g1_.data()[i] + w2_.data()[i] * g2_.data()[i];
        to_spectral(prod_, xhat_);
        xhat_.zero_nyquist();
        xhat_.set_mean(0.0);
    } else {
        xhat_.clear();
    }

    const cplx* th = theta_.data();
    const cplx* nh = nhat_.data();
    const cplx* xh = xhat_.data();
    cplx* nx = next_.data();
    double sq = 0.0;
    for (std::size_t idx = 0; idx < grid_.spec_size(); ++idx) {
        nx[idx] = diffusion_[idx] * (th[idx] - dt * nh[idx]) -
                  noise_gain_[idx] * xh[idx];
        sq += std::norm(nx[idx]);
    }
    if (!std::isfinite(sq)) return StepStatus::blowup;

    next_.set_mean(0.0);
    next_.zero_nyquist();
    std::swap(theta_, next_);
    t_ += dt;
    ++step_;
    return StepStatus::ok;
}

StepStatus Solver::run(double t_end, int diag_stride, DiagnosticSeries* series,
                       const std::function<void(const Solver&)>& on_record) {
    if (diag_stride < 1) throw std::invalid_argument("diag_stride must be >= 1");
    if (t_end < t_ - 1e-12) throw std::invalid_argument("t_end before current time");

    auto record = [&] {
        if (series != nullptr) series->rows.push_back(diagnostics());
        if (on_record) on_record(*this);
    };

    const long nsteps = std::lround((t_end - t_) / scheme_.dt);
    record();
    for (long i = 1; i <= nsteps; ++i) {
        const StepStatus st = step_internal();
        if (st != StepStatus::ok) return st;
        if (i % diag_stride == 0 || i == nsteps) record();
    }
    return StepStatus::ok;
}

DiagnosticRow Solver::diagnostics() const {
    DiagnosticRow r;
    r.t = t_;
    RealField phys(grid_);
    to_physical(theta_, phys);
    r.l2 = lebesgue_norm(phys, 2.0);
    r.l4 = lebesgue_norm(phys, 4.0);
    r.linf = lebesgue_norm(phys, 0.0);
    r.h_m1 = sobolev_norm(theta_, -1.0);
    r.h_malpha = sobolev_norm(theta_, -params_.alpha);
    r.h_0 = sobolev_norm(theta_, 0.0);

    SpectralField th = theta_;
    th.dealias();
    th.set_mean(0.0);
    SpectralField vx(grid_), vy(grid_);
    velocity_hat(th, params_.beta, vx, vy);
    RealField ux(grid_), uy(grid_);
    to_physical(vx, ux);
    to_physical(vy, uy);
    r.max_u = max_speed(ux, uy);
    r.cfl = scheme_.dt * r.max_u * grid_.n / grid_.length;
    r.mean_abs = std::abs(theta_.mean());
    return r;
}

}  // namespace kgsq
