#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace kgsq::quad {

// Raised when an adaptive integration cannot reach its tolerance within the
// evaluation budget.  Callers translate this into the budget exit status.
struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;   // conservative absolute error estimate
    long evals = 0;       // integrand evaluations consumed
    bool converged = false;
};

// Adaptive 1D integration over the union of [breaks[i], breaks[i+1]].
// Gauss-Legendre panels, bisection refinement driven by a priority queue on
// the whole-vs-halves disagreement.  Stops once the summed panel error drops
// below tol_abs or the evaluation budget runs out (converged=false then).
QuadResult integrate_1d(const std::function<double(double)>& f,
                        const std::vector<double>& breaks,
                        double tol_abs, long max_evals);

// Same idea on a 2D cell mesh: initial cells are the tensor products of the
// two break lists, refinement splits a cell into four.  f(x, y) must include
// any Jacobian factor itself (the covariance code passes polar coordinates).
QuadResult integrate_2d(const std::function<double(double, double)>& f,
                        const std::vector<double>& x_breaks,
                        const std::vector<double>& y_breaks,
                        double tol_abs, long max_evals);

}  // namespace kgsq::quad
