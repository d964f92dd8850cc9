#include "field_ops.hpp"

#include <algorithm>
#include <cmath>

#include "rng.hpp"

namespace kgsq {

namespace {

// weight of a stored column in sums over the full lattice: interior columns
// stand for their conjugates as well
inline double col_weight(const Grid& g, int col) {
    return (col == 0 || col == g.nyquist()) ? 1.0 : 2.0;
}

double stored_l2_sum(const SpectralField& f) {
    const Grid& g = f.grid();
    double s = 0.0;
    for (int row = 0; row < g.n; ++row)
        for (int col = 0; col < g.half(); ++col)
            s += col_weight(g, col) * std::norm(f.raw(row, col));
    return s;
}

} // namespace

void fractional_laplacian_inplace(SpectralField& f, double s) {
    const Grid& g = f.grid();
    if (s < 0.0) {
        const double scale = std::sqrt(stored_l2_sum(f));
        if (std::abs(f.mean()) > 1e-12 * std::max(1.0, scale))
            throw std::domain_error("fractional_laplacian: negative order needs a mean-free field");
    }
    if (s == 0.0) return;
    for (int row = 0; row < g.n; ++row) {
        const double kx = g.k1(row);
        for (int col = 0; col < g.half(); ++col) {
            const double ky = g.k2(col);
            const double k2 = kx * kx + ky * ky;
            f.raw(row, col) *= (k2 == 0.0) ? 0.0 : std::pow(k2, 0.5 * s);
        }
    }
}

SpectralField fractional_laplacian(const SpectralField& f, double s) {
    SpectralField out = f;
    fractional_laplacian_inplace(out, s);
    return out;
}

SpectralField derivative(const SpectralField& f, int axis) {
    const Grid& g = f.grid();
    SpectralField out(g);
    for (int row = 0; row < g.n; ++row) {
        const double kx = g.k1(row);
        for (int col = 0; col < g.half(); ++col) {
            const double k = (axis == 0) ? kx : g.k2(col);
            out.raw(row, col) = cplx(0.0, k) * f.raw(row, col);
        }
    }
    out.zero_nyquist();
    return out;
}

VectorField perp_gradient(const SpectralField& f) {
    VectorField v(f.grid());
    v.x = derivative(f, 1);
    v.x *= -1.0;
    v.y = derivative(f, 0);
    return v;
}

VectorField velocity_from_scalar(const SpectralField& f, double beta) {
    SpectralField stream = fractional_laplacian(f, beta - 2.0);
    VectorField v = perp_gradient(stream);
    v.x *= -1.0;
    v.y *= -1.0;
    return v;
}

double sobolev_norm(const SpectralField& f, double s) {
    const Grid& g = f.grid();
    double sum = 0.0;
    for (int row = 0; row < g.n; ++row) {
        const double kx = g.k1(row);
        for (int col = 0; col < g.half(); ++col) {
            if (row == 0 && col == 0) continue;
            const double ky = g.k2(col);
            const double k2 = kx * kx + ky * ky;
            sum += col_weight(g, col) * std::pow(k2, s) * std::norm(f.raw(row, col));
        }
    }
    return g.length * std::sqrt(sum);
}

double lebesgue_norm(const RealField& f, double q) {
    const Grid& g = f.grid();
    if (q == 0.0 || std::isinf(q)) {
        double m = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f.data()[i]));
        return m;
    }
    if (q < 1.0) throw std::invalid_argument("lebesgue_norm: q must be >= 1 (or 0 for sup)");
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += std::pow(std::abs(f.data()[i]), q);
    return std::pow(g.cell_area() * s, 1.0 / q);
}

double lebesgue_norm(const SpectralField& f, double q) {
    RealField phys(f.grid());
    to_physical(f, phys);
    return lebesgue_norm(phys, q);
}

double l2_inner(const SpectralField& f, const SpectralField& g) {
    const Grid& gr = f.grid();
    double s = 0.0;
    for (int row = 0; row < gr.n; ++row)
        for (int col = 0; col < gr.half(); ++col)
            s += col_weight(gr, col) *
                 (f.raw(row, col) * std::conj(g.raw(row, col))).real();
    return gr.length * gr.length * s;
}

double max_speed(const RealField& ux, const RealField& uy) {
    double m = 0.0;
    for (std::size_t i = 0; i < ux.size(); ++i) {
        const double s = ux.data()[i] * ux.data()[i] + uy.data()[i] * uy.data()[i];
        m = std::max(m, s);
    }
    return std::sqrt(m);
}

void pointwise_product(const RealField& a, const RealField& b, RealField& out) {
    for (std::size_t i = 0; i < a.size(); ++i)
        out.data()[i] = a.data()[i] * b.data()[i];
}

SpectralField random_bandlimited(const Grid& g, std::uint64_t seed, double kmin,
                                 double kmax, double slope, double l2_norm) {
    SpectralField f(g);
    const std::uint64_t base = rng::key(seed, rng::STREAM_DATUM, 0, 0);
    for (int row = 0; row < g.n; ++row) {
        for (int col = 0; col < g.half(); ++col) {
            const double kx = g.k1(row);
            const double ky = g.k2(col);
            const double k = std::hypot(kx, ky);
            if (k < kmin || k > kmax) continue;
            const auto z = rng::gauss_pair(base, g.at(row, col));
            const double mag = std::pow(k, slope);
            f.raw(row, col) = mag * cplx(z.a, z.b) / std::sqrt(2.0);
        }
    }
    f.enforce_hermitian();
    f.zero_nyquist();
    f.set_mean(0.0);
    const double cur = g.length * std::sqrt(stored_l2_sum(f));
    if (cur > 0.0) f *= l2_norm / cur;
    return f;
}

namespace {

// smooth disk indicator with tanh edge; periodic distance to the center
SpectralField patch_field(const Grid& g, double cx, double cy, double radius,
                          double width, double amplitude, double sep) {
    RealField phys(g);
    const double L = g.length;
    auto pdist = [L](double a, double b) {
        double d = std::fabs(a - b);
        return std::min(d, L - d);
    };
    for (int i = 0; i < g.n; ++i) {
        for (int j = 0; j < g.n; ++j) {
            const double x = i * g.dx();
            const double y = j * g.dx();
            double v = 0.0;
            if (sep == 0.0) {
                const double r = std::hypot(pdist(x, cx), pdist(y, cy));
                v = 0.5 * amplitude * (1.0 + std::tanh((radius - r) / width));
            } else {
                const double rp = std::hypot(pdist(x, cx - 0.5 * sep), pdist(y, cy));
                const double rm = std::hypot(pdist(x, cx + 0.5 * sep), pdist(y, cy));
                v = 0.5 * amplitude * (std::tanh((radius - rp) / width) -
                                       std::tanh((radius - rm) / width));
            }
            phys(i, j) = v;
        }
    }
    SpectralField f(g);
    to_spectral(phys, f);
    f.set_mean(0.0);
    f.zero_nyquist();
    return f;
}

} // namespace

SpectralField vortex_patch(const Grid& g, double cx, double cy, double radius,
                           double width, double amplitude) {
    return patch_field(g, cx, cy, radius, width, amplitude, 0.0);
}

SpectralField dipole(const Grid& g, double cx, double cy, double radius,
                     double width, double separation, double amplitude) {
    return patch_field(g, cx, cy, radius, width, amplitude, separation);
}

} // namespace kgsq
