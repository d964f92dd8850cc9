#include <cmath>
#include <complex>
#include <cstdio>
#include <vector>

#include "doctest.h"

#include "field.hpp"
#include "field_ops.hpp"
#include "rng.hpp"

using namespace kgsq;

namespace {

const double kTwoPi = 2.0 * M_PI;

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

// max |a - b| over coefficients, relative to max |b|
double spectral_rel_diff(const SpectralField& a, const SpectralField& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.grid().spec_size(); ++i) {
        num = std::max(num, std::abs(a.data()[i] - b.data()[i]));
        den = std::max(den, std::abs(b.data()[i]));
    }
    return num / std::max(den, 1e-300);
}

SpectralField random_field(const Grid& g, std::uint64_t seed) {
    return random_bandlimited(g, seed, 1.0, g.dk() * g.dealias_m(), -1.0, 1.0);
}

}  // namespace

TEST_CASE("transform round trip is exact to working precision") {
    for (double L : {kTwoPi, 3.7}) {
        Grid g(64, L);
        SpectralField f = random_field(g, 11);
        RealField phys(g);
        to_physical(f, phys);
        SpectralField back(g);
        to_spectral(phys, back);
        CHECK(spectral_rel_diff(back, f) < 1e-12);
    }
}

TEST_CASE("fractional laplacian composes and inverts") {
    Grid g(64, kTwoPi);
    SpectralField f = random_field(g, 12);

    for (double s : {0.5, 1.0, 2.0, -0.7}) {
        SpectralField id = fractional_laplacian(fractional_laplacian(f, s), -s);
        CHECK(spectral_rel_diff(id, f) < 1e-10);
    }

    // composition equals the summed order
    SpectralField two = fractional_laplacian(fractional_laplacian(f, 0.6), 0.9);
    SpectralField one = fractional_laplacian(f, 1.5);
    CHECK(spectral_rel_diff(two, one) < 1e-10);

    // s = 2 is minus the laplacian: a cos mode scales by |k|^2
    SpectralField mode(g);
    mode.add_mode(3, 4, cplx(0.35, 0.0));
    SpectralField lap = fractional_laplacian(mode, 2.0);
    CHECK(std::abs(lap.coeff(3, 4) - cplx(0.35 * 25.0, 0.0)) < 1e-12 * 25.0);
}

TEST_CASE("derivative of a single cosine mode") {
    Grid g(64, kTwoPi);
    const double a = 0.8;
    SpectralField f(g);
    f.add_mode(3, 0, cplx(a / 2, 0.0));  // a cos(3 x1)

    RealField d1(g);
    to_physical(derivative(f, 0), d1);
    for (int i : {0, 5, 17, 40}) {
        const double x1 = g.dx() * i;
        CHECK(std::abs(d1(i, 9) - (-3.0 * a * std::sin(3.0 * x1))) < 1e-12);
    }
}

TEST_CASE("velocity is divergence free for every beta") {
    Grid g(64, kTwoPi);
    SpectralField f = random_field(g, 13);
    for (double beta : {0.0, 0.3, 0.7, 1.0}) {
        VectorField u = velocity_from_scalar(f, beta);
        SpectralField div = derivative(u.x, 0);
        div += derivative(u.y, 1);
        double umax = 0.0, dmax = 0.0;
        for (std::size_t i = 0; i < g.spec_size(); ++i) {
            umax = std::max(umax, std::abs(u.x.data()[i]));
            dmax = std::max(dmax, std::abs(div.data()[i]));
        }
        CHECK(dmax < 1e-12 * umax);
    }
}

TEST_CASE("velocity of a single mode matches the stream function formula") {
    // u = -grad^perp psi, psi = Lambda^(beta-2) theta; for
    // theta = a cos(k.x): u1 = -a |k|^(beta-2) k2 sin(k.x),
    //                      u2 =  a |k|^(beta-2) k1 sin(k.x)
    Grid g(64, kTwoPi);
    const double a = 1.3, beta = 0.4;
    const int m1 = 2, m2 = 5;
    SpectralField f(g);
    f.add_mode(m1, m2, cplx(a / 2, 0.0));

    VectorField u = velocity_from_scalar(f, beta);
    RealField u1(g), u2(g);
    to_physical(u.x, u1);
    to_physical(u.y, u2);

    const double ksq = double(m1 * m1 + m2 * m2);
    const double fac = a * std::pow(ksq, (beta - 2.0) / 2.0);
    for (int i : {1, 7, 23}) {
        for (int j : {0, 11, 50}) {
            const double phase = m1 * g.dx() * i + m2 * g.dx() * j;
            const double s = std::sin(phase);
            CHECK(std::abs(u1(i, j) - (-fac * m2 * s)) < 1e-12);
            CHECK(std::abs(u2(i, j) - (fac * m1 * s)) < 1e-12);
        }
    }
}

TEST_CASE("norms of a pure cosine match closed forms") {
    // On [0,L)^2: ||a cos(k.x)||_L2 = a L / sqrt(2),
    // ||.||_L4^4 = a^4 (3/8) L^2, ||.||_Linf = a, and the Sobolev seminorm
    // of order s is a |k|^s (L^2/2)^(1/2).
    Grid g(64, kTwoPi);
    const double a = 0.9, L = kTwoPi;
    SpectralField f(g);
    f.add_mode(3, 0, cplx(a / 2, 0.0));

    CHECK(rel_err(lebesgue_norm(f, 2.0), a * L / std::sqrt(2.0)) < 1e-12);
    CHECK(rel_err(lebesgue_norm(f, 4.0),
                  a * std::pow(3.0 / 8.0, 0.25) * std::sqrt(L)) < 1e-12);
    CHECK(rel_err(lebesgue_norm(f, 0.0), a) < 1e-12);  // q = 0 is the sup

    for (double s : {-1.0, -0.5, 0.0, 1.0, 2.0}) {
        const double want = a * std::pow(3.0, s) * std::sqrt(L * L / 2.0);
        CHECK(rel_err(sobolev_norm(f, s), want) < 1e-12);
    }
}

TEST_CASE("collocation and spectral L2 norms agree on random fields") {
    Grid g(64, 3.7);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SpectralField f = random_field(g, 100 + seed);
        CHECK(rel_err(lebesgue_norm(f, 2.0), sobolev_norm(f, 0.0)) < 1e-10);
    }
}

TEST_CASE("l2 inner product matches the norm") {
    Grid g(64, kTwoPi);
    SpectralField f = random_field(g, 21);
    const double n2 = lebesgue_norm(f, 2.0);
    CHECK(rel_err(l2_inner(f, f), n2 * n2) < 1e-10);

    // orthogonality of distinct modes
    SpectralField ma(g), mb(g);
    ma.add_mode(1, 2, cplx(0.5, 0.1));
    mb.add_mode(4, 1, cplx(0.2, -0.3));
    CHECK(std::abs(l2_inner(ma, mb)) < 1e-12);
}

TEST_CASE("dealias drops exactly the outer band") {
    Grid g(66, kTwoPi);  // floor(66/3) = 22 keeps the band asymmetric to N/2
    const int band = g.dealias_m();
    SpectralField f(g);
    f.add_mode(band, 0, cplx(1.0, 0.0));
    f.add_mode(band + 1, 0, cplx(1.0, 0.0));
    f.add_mode(0, band, cplx(1.0, 0.0));
    f.add_mode(2, band + 1, cplx(1.0, 0.0));
    f.add_mode(-band, 3, cplx(0.0, 1.0));
    f.dealias();
    CHECK(std::abs(f.coeff(band, 0) - cplx(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(f.coeff(-band, 3) - cplx(0.0, 1.0)) < 1e-15);
    CHECK(std::abs(f.coeff(band + 1, 0)) == 0.0);
    CHECK(std::abs(f.coeff(2, band + 1)) == 0.0);
}

TEST_CASE("nyquist entries can be cleared") {
    Grid g(64, kTwoPi);
    SpectralField f(g);
    f.raw(g.nyquist(), 3) = cplx(1.0, 2.0);   // row m1 = -N/2
    f.raw(5, g.nyquist()) = cplx(0.5, -1.0);  // column m2 = N/2
    f.zero_nyquist();
    CHECK(f.raw(g.nyquist(), 3) == cplx(0.0, 0.0));
    CHECK(f.raw(5, g.nyquist()) == cplx(0.0, 0.0));
}

TEST_CASE("hermitian fixup reconciles the redundant columns") {
    Grid g(64, kTwoPi);
    SpectralField f(g);
    // Plant an inconsistent pair in the self-conjugate column m2 = 0.
    f.raw(g.row_of_m(3), 0) = cplx(1.0, 0.5);
    f.raw(g.row_of_m(-3), 0) = cplx(2.0, 0.25);
    f.enforce_hermitian();
    CHECK(f.coeff(3, 0) == std::conj(f.coeff(-3, 0)));
    // self-conjugate entries must be real
    CHECK(f.raw(0, 0).imag() == 0.0);
    CHECK(f.raw(g.nyquist(), 0).imag() == 0.0);
}

TEST_CASE("checkpoint round trip is bitwise") {
    Grid g(32, 1.5);
    SpectralField f = random_bandlimited(g, 77, 4.0, 30.0, -0.5, 2.0);
    const std::string path = "roundtrip_checkpoint.bin";
    write_checkpoint(path, f, 0.625);

    double t = 0.0;
    SpectralField back = read_checkpoint(path, &t);
    CHECK(t == 0.625);
    REQUIRE(back.grid().same(g));
    for (std::size_t i = 0; i < g.spec_size(); ++i)
        CHECK(back.data()[i] == f.data()[i]);
    std::remove(path.c_str());
}

TEST_CASE("random band limited fields honor their contract") {
    Grid g(64, kTwoPi);
    const double kmin = 2.0, kmax = 9.0;
    SpectralField f = random_bandlimited(g, 5, kmin, kmax, -1.2, 0.75);

    CHECK(rel_err(lebesgue_norm(f, 2.0), 0.75) < 1e-10);
    CHECK(f.mean() == 0.0);
    for (int m1 = -g.nyquist() + 1; m1 < g.nyquist(); ++m1)
        for (int m2 = 0; m2 <= g.nyquist() - 1; ++m2) {
            const double kk = g.dk() * std::sqrt(double(m1) * m1 + double(m2) * m2);
            if ((kk < kmin - 1e-12 || kk > kmax + 1e-12) &&
                !(m1 == 0 && m2 == 0))
                CHECK(std::abs(f.coeff(m1, m2)) == 0.0);
        }

    // deterministic in the seed, different across seeds
    SpectralField f2 = random_bandlimited(g, 5, kmin, kmax, -1.2, 0.75);
    CHECK(spectral_rel_diff(f2, f) == 0.0);
    SpectralField f3 = random_bandlimited(g, 6, kmin, kmax, -1.2, 0.75);
    CHECK(spectral_rel_diff(f3, f) > 1e-3);
}
