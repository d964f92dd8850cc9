#include "noise.hpp"

#include <cmath>
#include <stdexcept>

#include "rng.hpp"

namespace kgsq {

NoiseModel::NoiseModel(const Grid& g, double alpha, double kmax)
    : grid_(g), alpha_(alpha), kmax_(kmax) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("noise: alpha must lie in (0,1)");
    const double band = g.dealias_m() * g.dk();
    if (kmax <= 0.0) kmax_ = kmax = band;
    if (kmax > band * (1.0 + 1e-12))
        throw std::invalid_argument("noise: kmax exceeds the dealiased band");
    norm_ = 2.0 * M_PI / (g.length * g.length);

    const int mmax = static_cast<int>(std::floor(kmax / g.dk()));
    modes_.reserve(static_cast<std::size_t>(4.0 * mmax * mmax));
    // deterministic row-major order; closed under negation by symmetry of
    // the loop bounds
    for (int m1 = -mmax; m1 <= mmax; ++m1) {
        for (int m2 = -mmax; m2 <= mmax; ++m2) {
            if (m1 == 0 && m2 == 0) continue;
            const double k1 = g.dk() * m1;
            const double k2 = g.dk() * m2;
            const double k = std::hypot(k1, k2);
            if (k > kmax) continue;
            NoiseMode m;
            m.m1 = m1;
            m.m2 = m2;
            m.k1 = k1;
            m.k2 = k2;
            m.amp = std::pow(1.0 + k1 * k1 + k2 * k2, -0.5 * (1.0 + alpha));
            m.e1 = -k2 / k;
            m.e2 = k1 / k;
            modes_.push_back(m);
        }
    }
    if (modes_.empty())
        throw std::invalid_argument("noise: no lattice modes below kmax");
}

double NoiseModel::corrector_c0() const {
    double s = 0.0;
    for (const auto& m : modes_) s += m.amp * m.amp;
    return 0.5 * s * norm_;
}

Mat2 NoiseModel::covariance_C(double z1, double z2) const {
    Mat2 c{{{0.0, 0.0}, {0.0, 0.0}}};
    for (const auto& m : modes_) {
        const double w = m.amp * m.amp * std::cos(m.k1 * z1 + m.k2 * z2);
        c[0][0] += w * m.e1 * m.e1;
        c[0][1] += w * m.e1 * m.e2;
        c[1][0] += w * m.e2 * m.e1;
        c[1][1] += w * m.e2 * m.e2;
    }
    for (auto& row : c)
        for (auto& v : row) v *= norm_;
    return c;
}

Mat2 NoiseModel::structure_Q(double z1, double z2) const {
    const Mat2 c0 = covariance_C(0.0, 0.0);
    const Mat2 cz = covariance_C(z1, z2);
    Mat2 q;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) q[i][j] = c0[i][j] - cz[i][j];
    return q;
}

BrownianDriver::Increment BrownianDriver::draw(std::uint64_t step,
                                               std::uint64_t mode,
                                               double dt) const {
    const auto z = rng::gauss_pair(rng::key(seed_, rng::STREAM_NOISE, step, mode), 0);
    const double s = std::sqrt(dt);
    return {s * z.a, s * z.b};
}

void sample_increment(const NoiseModel& model, const BrownianDriver& driver,
                      std::uint64_t step, double dt, VectorField& out) {
    const Grid& g = model.grid();
    if (!out.grid().same(g)) out = VectorField(g);
    out.x.clear();
    out.y.clear();
    const double root_norm = std::sqrt(model.normalization());
    const auto& modes = model.modes();
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const NoiseMode& m = modes[i];
        const auto inc = driver.draw(step, i, dt);
        // cos(k.x) dB + sin(k.x) dB' contributes (dB - i dB')/2 at +k
        const cplx c = 0.5 * m.amp * root_norm * cplx(inc.db, -inc.dbp);
        out.x.add_mode(m.m1, m.m2, c * m.e1);
        out.y.add_mode(m.m1, m.m2, c * m.e2);
    }
}

} // namespace kgsq
