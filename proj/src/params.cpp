#include "params.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kgsq {

void ModelParams::check() const {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("params: alpha must lie in (0,1)");
    if (!(beta >= 0.0 && beta <= 1.0))
        throw std::invalid_argument("params: beta must lie in [0,1]");
    if (!(p > 1.0) || std::isinf(p))
        throw std::invalid_argument("params: p must lie in (1,inf)");
    if (!(nu >= 0.0))
        throw std::invalid_argument("params: nu must be >= 0");
    if (!(L > 0.0))
        throw std::invalid_argument("params: L must be positive");
    if (N < 8 || N % 2 != 0)
        throw std::invalid_argument("params: N must be even and >= 8");
}

double critical_exponent(double alpha, double beta) {
    const double gap = 1.0 - alpha - 0.5 * beta;
    if (!(gap > 0.0))
        throw std::domain_error("critical_exponent: requires alpha + beta/2 < 1");
    return 1.0 / gap;
}

ValidationReport validate(const ModelParams& mp) {
    mp.check();
    ValidationReport r;
    r.regime = (mp.beta == 0.0) ? Regime::Euler : Regime::GeneralizedSQG;

    const double gap = 1.0 - mp.alpha - 0.5 * mp.beta;
    if (gap > 0.0) {
        r.p_star = 1.0 / gap;
        const double tol = 1e-12 * std::max(1.0, r.p_star);
        r.critical = std::fabs(mp.p - r.p_star) < tol;
        r.supercritical = (mp.p < r.p_star - tol);
    } else {
        r.p_star = std::numeric_limits<double>::quiet_NaN();
        r.supercritical = true;
        r.notes.push_back("alpha + beta/2 >= 1: no finite critical exponent");
    }

    const bool integrable_enough = !r.supercritical && !std::isnan(r.p_star);
    if (r.regime == Regime::Euler) {
        // alpha <= 1 - 1/p
        r.uniqueness = integrable_enough;
    } else {
        // alpha + beta/2 + 1/p <= 1 and alpha + beta <= 1
        const bool range_ok = (mp.alpha + mp.beta <= 1.0);
        r.uniqueness = integrable_enough && range_ok;
        if (integrable_enough && !range_ok) {
            r.conjectural = true;
            r.notes.push_back("alpha + beta > 1 with alpha + beta/2 < 1: "
                              "uniqueness conjectural, outside the proven range");
        }
    }

    const double inv_r = 0.5 * (mp.alpha + mp.beta) + 1.0 / mp.p;
    r.r_sufficient = 1.0 / inv_r;
    r.r_condition = (r.r_sufficient > 1.0) && (mp.alpha + mp.beta <= 1.0);

    if (r.critical) r.notes.push_back("p equals the critical exponent");
    if (r.supercritical) r.notes.push_back("p below the critical exponent: no uniqueness claim");
    return r;
}

} // namespace kgsq
