#include <cmath>
#include <vector>

#include "doctest.h"

#include "field.hpp"
#include "field_ops.hpp"
#include "noise.hpp"

using namespace kgsq;

namespace {

const double kTwoPi = 2.0 * M_PI;

NoiseModel small_model(double alpha = 0.5) {
    Grid g(64, kTwoPi);
    return NoiseModel(g, alpha, double(g.dealias_m()) * g.dk());
}

}  // namespace

TEST_CASE("mode set geometry") {
    NoiseModel model = small_model(0.7);
    const auto& modes = model.modes();
    REQUIRE(!modes.empty());

    for (const auto& m : modes) {
        CHECK((m.m1 != 0 || m.m2 != 0));  // no zero mode
        const double kk = std::hypot(m.k1, m.k2);
        CHECK(kk <= model.kmax() + 1e-12);

        // amp = <k>^(-1-alpha), e = k^perp/|k|
        CHECK(m.amp ==
              doctest::Approx(std::pow(1.0 + kk * kk, -(1.0 + 0.7) / 2.0))
                  .epsilon(1e-14));
        CHECK(std::hypot(m.e1, m.e2) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(m.e1 * m.k1 + m.e2 * m.k2) < 1e-12);

        // the set is closed under k <-> -k
        bool found = false;
        for (const auto& o : modes)
            if (o.m1 == -m.m1 && o.m2 == -m.m2) { found = true; break; }
        CHECK(found);
    }
    CHECK(model.normalization() ==
          doctest::Approx(kTwoPi / (kTwoPi * kTwoPi)).epsilon(1e-14));
}

TEST_CASE("corrector is half the summed mode energy") {
    NoiseModel model = small_model(0.5);
    double sum = 0.0;
    for (const auto& m : model.modes()) sum += m.amp * m.amp;
    const double want = 0.5 * sum * model.normalization();
    CHECK(model.corrector_c0() == doctest::Approx(want).epsilon(1e-15));
}

TEST_CASE("corrector approaches the continuum value as the lattice refines") {
    // The mode sum is a Riemann sum (cell area dk^2, prefactor 1/(4 pi)) of
    // (1+|k|^2)^(-1-alpha) over |k| <= kmax, whose full-plane value is
    // 1/(4 alpha).  Two error sources shrink together only if both the
    // cutoff grows (tail ~ kmax^(-2 alpha)) and the lattice refines: the
    // excluded k = 0 cell alone costs pi/L^2, so at fixed L the sum
    // converges to a value strictly below the continuum one.
    const double alpha = 0.5;
    const double continuum = 1.0 / (4.0 * alpha);
    const struct {
        int n;
        double length;
        double kmax;
    } rungs[] = {{64, kTwoPi, 20.0},
                 {256, 2.0 * kTwoPi, 40.0},
                 {1024, 4.0 * kTwoPi, 80.0}};
    double prev = 1e100;
    for (const auto& r : rungs) {
        Grid g(r.n, r.length);
        NoiseModel model(g, alpha, r.kmax);
        const double err = std::abs(model.corrector_c0() - continuum);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 0.02);
}

TEST_CASE("covariance at the origin is isotropic with trace 2 c0") {
    NoiseModel model = small_model(0.6);
    Mat2 c = model.covariance_C(0.0, 0.0);
    CHECK(c[0][0] + c[1][1] ==
          doctest::Approx(2.0 * model.corrector_c0()).epsilon(1e-13));
    CHECK(c[0][0] == doctest::Approx(c[1][1]).epsilon(1e-12));
    CHECK(std::abs(c[0][1]) < 1e-14);
    CHECK(std::abs(c[1][0]) < 1e-14);
}

TEST_CASE("structure function parity, zero at zero, and positivity") {
    NoiseModel model = small_model(0.5);
    Mat2 q0 = model.structure_Q(0.0, 0.0);
    CHECK(std::abs(q0[0][0]) < 1e-14);
    CHECK(std::abs(q0[1][1]) < 1e-14);

    for (auto [z1, z2] : {std::pair{0.3, 0.0}, {0.1, 0.2}, {1.0, -0.7}}) {
        Mat2 q = model.structure_Q(z1, z2);
        Mat2 qm = model.structure_Q(-z1, -z2);
        CHECK(q[0][0] == doctest::Approx(qm[0][0]).epsilon(1e-13));
        CHECK(q[0][1] == doctest::Approx(qm[0][1]).epsilon(1e-13));
        CHECK(q[0][1] == doctest::Approx(q[1][0]).epsilon(1e-13));

        // PSD: trace and determinant nonnegative
        const double tr = q[0][0] + q[1][1];
        const double det = q[0][0] * q[1][1] - q[0][1] * q[1][0];
        CHECK(tr >= -1e-13);
        CHECK(det >= -1e-13 * tr * tr);
    }
}

TEST_CASE("driver increments replay bit identically and scale with dt") {
    BrownianDriver d1(1234), d2(1234), d3(99);
    auto a = d1.draw(17, 5, 1e-3);
    auto b = d2.draw(17, 5, 1e-3);
    CHECK(a.db == b.db);
    CHECK(a.dbp == b.dbp);

    // pure function of (seed, step, mode): order of evaluation is irrelevant
    (void)d2.draw(1, 1, 1e-3);
    auto c = d2.draw(17, 5, 1e-3);
    CHECK(c.db == a.db);

    // sqrt(dt) scaling is exact
    auto w = d1.draw(17, 5, 4e-3);
    CHECK(w.db == doctest::Approx(2.0 * a.db).epsilon(1e-15));

    // distinct seeds decorrelate
    auto z = d3.draw(17, 5, 1e-3);
    CHECK(z.db != a.db);
}

TEST_CASE("synthesized increment matches the defining mode sum") {
    NoiseModel model = small_model(0.5);
    const Grid& g = model.grid();
    BrownianDriver driver(777);
    const double dt = 1e-3;

    VectorField dw(g);
    sample_increment(model, driver, 3, dt, dw);

    RealField wx(g), wy(g);
    to_physical(dw.x, wx);
    to_physical(dw.y, wy);

    const double sn = std::sqrt(model.normalization());
    for (auto [i, j] : {std::pair{0, 0}, {5, 40}, {33, 12}}) {
        const double x1 = g.dx() * i, x2 = g.dx() * j;
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t m = 0; m < model.modes().size(); ++m) {
            const auto& mo = model.modes()[m];
            const auto inc = driver.draw(3, m, dt);
            const double phase = mo.k1 * x1 + mo.k2 * x2;
            const double amp = mo.amp * sn *
                               (std::cos(phase) * inc.db +
                                std::sin(phase) * inc.dbp);
            s1 += amp * mo.e1;
            s2 += amp * mo.e2;
        }
        CHECK(wx(i, j) == doctest::Approx(s1).epsilon(1e-11));
        CHECK(wy(i, j) == doctest::Approx(s2).epsilon(1e-11));
    }
}

TEST_CASE("increments are divergence free") {
    NoiseModel model = small_model(0.5);
    const Grid& g = model.grid();
    BrownianDriver driver(31);
    VectorField dw(g);
    sample_increment(model, driver, 0, 1e-3, dw);

    SpectralField div = derivative(dw.x, 0);
    div += derivative(dw.y, 1);
    double wmax = 0.0, dmax = 0.0;
    for (std::size_t i = 0; i < g.spec_size(); ++i) {
        wmax = std::max(wmax, std::abs(dw.x.data()[i]));
        dmax = std::max(dmax, std::abs(div.data()[i]));
    }
    CHECK(dmax < 1e-11 * wmax);
}

TEST_CASE("empirical covariance of the increments matches C(0)") {
    NoiseModel model = small_model(0.5);
    BrownianDriver driver(2024);
    const double dt = 1e-3;
    const int draws = 3000;
    const double sn = std::sqrt(model.normalization());
    const auto& modes = model.modes();

    // At the origin only the cosine channel contributes.
    std::vector<double> c11(draws), c22(draws), c12(draws);
    double mean1 = 0.0;
    for (int d = 0; d < draws; ++d) {
        double v1 = 0.0, v2 = 0.0;
        for (std::size_t m = 0; m < modes.size(); ++m) {
            const auto inc = driver.draw(std::uint64_t(d), m, dt);
            const double a = modes[m].amp * sn * inc.db;
            v1 += a * modes[m].e1;
            v2 += a * modes[m].e2;
        }
        c11[d] = v1 * v1 / dt;
        c22[d] = v2 * v2 / dt;
        c12[d] = v1 * v2 / dt;
        mean1 += v1;
    }
    mean1 /= draws;

    auto mean_se = [&](const std::vector<double>& xs) {
        double m = 0.0;
        for (double x : xs) m += x;
        m /= xs.size();
        double v = 0.0;
        for (double x : xs) v += (x - m) * (x - m);
        v /= double(xs.size() - 1) * xs.size();
        return std::pair{m, std::sqrt(v)};
    };
    const Mat2 exact = model.covariance_C(0.0, 0.0);
    auto [m11, se11] = mean_se(c11);
    auto [m22, se22] = mean_se(c22);
    auto [m12, se12] = mean_se(c12);
    CHECK(std::abs(m11 - exact[0][0]) < 4.0 * se11);
    CHECK(std::abs(m22 - exact[1][1]) < 4.0 * se22);
    CHECK(std::abs(m12 - exact[0][1]) < 4.0 * se12);

    // and the mean increment vanishes at the matching rate
    CHECK(std::abs(mean1) <
          4.0 * std::sqrt(exact[0][0] * dt / draws));
}
