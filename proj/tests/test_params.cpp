#include <stdexcept>

#include "doctest.h"

#include "params.hpp"

using namespace kgsq;

TEST_CASE("defaults pass validation") {
    ModelParams mp;
    CHECK_NOTHROW(mp.check());
}

TEST_CASE("out-of-range fields are rejected") {
    ModelParams mp;

    mp.alpha = 0.0;
    CHECK_THROWS_AS(mp.check(), std::invalid_argument);
    mp.alpha = 1.0;
    CHECK_THROWS_AS(mp.check(), std::invalid_argument);
    mp.alpha = 0.5;

    mp.beta = -0.1;
    CHECK_THROWS_AS(mp.check(), std::invalid_argument);
    mp.beta = 1.5;
    CHECK_THROWS_AS(mp.check(), std::invalid_argument);
    mp.beta = 0.0;

    mp.p = 1.0;
    CHECK_THROWS_AS(mp.check(), std::invalid_argument);
    mp.p = 2.0;

    mp.nu = -1e-9;
    CHECK_THROWS_AS(mp.check(), std::invalid_argument);
    mp.nu = 0.0;

    mp.L = 0.0;
    CHECK_THROWS_AS(mp.check(), std::invalid_argument);
    mp.L = 1.0;

    mp.N = 0;
    CHECK_THROWS_AS(mp.check(), std::invalid_argument);
    mp.N = 7;  // odd grids have no clean Nyquist split
    CHECK_THROWS_AS(mp.check(), std::invalid_argument);
}

TEST_CASE("critical exponent formula") {
    // p* = 1/(1 - alpha - beta/2), by direct substitution
    CHECK(critical_exponent(0.5, 0.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(critical_exponent(2.0 / 3.0, 0.0) ==
          doctest::Approx(3.0).epsilon(1e-14));
    CHECK(critical_exponent(0.4, 0.4) ==
          doctest::Approx(1.0 / (1.0 - 0.4 - 0.2)).epsilon(1e-14));
    // alpha + beta/2 >= 1 leaves no finite exponent
    CHECK_THROWS_AS(critical_exponent(0.8, 0.4), std::domain_error);
}

TEST_CASE("regime classification") {
    ModelParams mp;
    mp.beta = 0.0;
    CHECK(validate(mp).regime == Regime::Euler);
    mp.beta = 0.5;
    CHECK(validate(mp).regime == Regime::GeneralizedSQG);
}

TEST_CASE("uniqueness window tracks p against p*") {
    ModelParams mp;
    mp.alpha = 2.0 / 3.0;
    mp.beta = 0.0;  // p* = 3

    mp.p = 4.0;
    ValidationReport rep = validate(mp);
    CHECK(rep.p_star == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(rep.uniqueness);
    CHECK_FALSE(rep.supercritical);
    CHECK_FALSE(rep.critical);

    mp.p = 3.0;
    rep = validate(mp);
    CHECK(rep.critical);
    CHECK(rep.uniqueness);

    mp.p = 2.5;
    rep = validate(mp);
    CHECK(rep.supercritical);
    CHECK_FALSE(rep.uniqueness);
}

TEST_CASE("interpolation exponent r") {
    // 1/r = (alpha+beta)/2 + 1/p; r > 1 needs p above 2/(2-alpha-beta)
    ModelParams mp;
    mp.alpha = 0.5;
    mp.beta = 0.0;
    mp.p = 4.0;
    ValidationReport rep = validate(mp);
    CHECK(rep.r_sufficient == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(rep.r_condition);

    mp.p = 2.0;  // 1/r = 0.25 + 0.5 -> r = 4/3 > 1 still
    rep = validate(mp);
    CHECK(rep.r_sufficient == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(rep.r_condition);
}

TEST_CASE("conjectural band is flagged") {
    ModelParams mp;
    mp.alpha = 0.7;
    mp.beta = 0.5;  // alpha+beta = 1.2 > 1, alpha+beta/2 = 0.95 < 1
    mp.p = 40.0;    // needs p >= p* = 20
    ValidationReport rep = validate(mp);
    CHECK(rep.conjectural);
    CHECK_FALSE(rep.r_condition);  // r-route needs alpha + beta <= 1
}
