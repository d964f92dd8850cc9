#include "quadrature.hpp"

#include <cmath>
#include <queue>

namespace kgsq::quad {

namespace {

// 15-point Gauss-Legendre rule on [-1, 1] (nodes >= 0; mirror for the rest).
constexpr int kGl15 = 8;
constexpr double kGl15Node[kGl15] = {
    0.0,
    0.2011940939974345,
    0.3941513470775634,
    0.5709721726085388,
    0.7244177313601701,
    0.8482065834104272,
    0.9372733924007060,
    0.9879925180204854,
};
constexpr double kGl15Weight[kGl15] = {
    0.2025782419255613,
    0.1984314853271116,
    0.1861610000155622,
    0.1662692058169939,
    0.1395706779261543,
    0.1071592204671719,
    0.0703660474881081,
    0.0307532419961173,
};

// 5-point rule, used as a tensor product for 2D cells.
constexpr int kGl5 = 5;
constexpr double kGl5Node[kGl5] = {
    -0.9061798459386640, -0.5384693101056831, 0.0,
    0.5384693101056831, 0.9061798459386640,
};
constexpr double kGl5Weight[kGl5] = {
    0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
    0.4786286704993665, 0.2369268850561891,
};

double gl15(const std::function<double(double)>& f, double a, double b,
            long& evals) {
    const double mid = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    double sum = kGl15Weight[0] * f(mid);
    for (int i = 1; i < kGl15; ++i) {
        const double d = hw * kGl15Node[i];
        sum += kGl15Weight[i] * (f(mid - d) + f(mid + d));
    }
    evals += 2 * kGl15 - 1;
    const double v = hw * sum;
    if (!std::isfinite(v))
        throw std::runtime_error("non-finite integrand in 1D quadrature");
    return v;
}

double gl5x5(const std::function<double(double, double)>& f, double x0,
             double x1, double y0, double y1, long& evals) {
    const double xm = 0.5 * (x0 + x1), xh = 0.5 * (x1 - x0);
    const double ym = 0.5 * (y0 + y1), yh = 0.5 * (y1 - y0);
    double sum = 0.0;
    for (int i = 0; i < kGl5; ++i) {
        const double x = xm + xh * kGl5Node[i];
        double row = 0.0;
        for (int j = 0; j < kGl5; ++j)
            row += kGl5Weight[j] * f(x, ym + yh * kGl5Node[j]);
        sum += kGl5Weight[i] * row;
    }
    evals += kGl5 * kGl5;
    const double v = xh * yh * sum;
    if (!std::isfinite(v))
        throw std::runtime_error("non-finite integrand in 2D quadrature");
    return v;
}

struct Panel1 {
    double a, b;
    double halves;  // refined estimate, used as the panel value
    double err;
    bool operator<(const Panel1& o) const { return err < o.err; }
};

struct Cell2 {
    double x0, x1, y0, y1;
    double fine;  // sum of the four quarter estimates
    double quarter[4];
    double err;
    bool operator<(const Cell2& o) const { return err < o.err; }
};

}  // namespace

QuadResult integrate_1d(const std::function<double(double)>& f,
                        const std::vector<double>& breaks, double tol_abs,
                        long max_evals) {
    if (breaks.size() < 2) throw std::invalid_argument("need >= 2 breakpoints");
    long evals = 0;
    std::priority_queue<Panel1> queue;
    double total = 0.0, total_err = 0.0;

    auto make_panel = [&](double a, double b, double whole) {
        const double mid = 0.5 * (a + b);
        Panel1 p;
        p.a = a;
        p.b = b;
        const double left = gl15(f, a, mid, evals);
        const double right = gl15(f, mid, b, evals);
        p.halves = left + right;
        p.err = std::abs(p.halves - whole);
        total += p.halves;
        total_err += p.err;
        queue.push(p);
    };

    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i] < breaks[i + 1]))
            throw std::invalid_argument("breakpoints must be increasing");
        make_panel(breaks[i], breaks[i + 1],
                   gl15(f, breaks[i], breaks[i + 1], evals));
    }

    while (total_err > tol_abs && evals < max_evals && queue.top().err > 0.0) {
        Panel1 p = queue.top();
        queue.pop();
        total -= p.halves;
        total_err -= p.err;
        const double mid = 0.5 * (p.a + p.b);
        // The two halves were already integrated once when p was built; rebuild
        // each as its own panel (whole = previous half estimate).
        make_panel(p.a, mid, gl15(f, p.a, mid, evals));
        make_panel(mid, p.b, gl15(f, mid, p.b, evals));
    }

    QuadResult r;
    r.evals = evals;
    while (!queue.empty()) {
        r.value += queue.top().halves;
        r.error += queue.top().err;
        queue.pop();
    }
    r.converged = r.error <= tol_abs;
    return r;
}

QuadResult integrate_2d(const std::function<double(double, double)>& f,
                        const std::vector<double>& x_breaks,
                        const std::vector<double>& y_breaks, double tol_abs,
                        long max_evals) {
    if (x_breaks.size() < 2 || y_breaks.size() < 2)
        throw std::invalid_argument("need >= 2 breakpoints per axis");
    long evals = 0;
    std::priority_queue<Cell2> queue;
    double total = 0.0, total_err = 0.0;

    auto make_cell = [&](double x0, double x1, double y0, double y1,
                         double coarse) {
        Cell2 c{x0, x1, y0, y1, 0.0, {0, 0, 0, 0}, 0.0};
        const double xm = 0.5 * (x0 + x1), ym = 0.5 * (y0 + y1);
        c.quarter[0] = gl5x5(f, x0, xm, y0, ym, evals);
        c.quarter[1] = gl5x5(f, xm, x1, y0, ym, evals);
        c.quarter[2] = gl5x5(f, x0, xm, ym, y1, evals);
        c.quarter[3] = gl5x5(f, xm, x1, ym, y1, evals);
        c.fine = c.quarter[0] + c.quarter[1] + c.quarter[2] + c.quarter[3];
        c.err = std::abs(c.fine - coarse);
        total += c.fine;
        total_err += c.err;
        queue.push(c);
    };

    for (size_t i = 0; i + 1 < x_breaks.size(); ++i) {
        if (!(x_breaks[i] < x_breaks[i + 1]))
            throw std::invalid_argument("breakpoints must be increasing");
        for (size_t j = 0; j + 1 < y_breaks.size(); ++j) {
            if (!(y_breaks[j] < y_breaks[j + 1]))
                throw std::invalid_argument("breakpoints must be increasing");
            make_cell(x_breaks[i], x_breaks[i + 1], y_breaks[j], y_breaks[j + 1],
                      gl5x5(f, x_breaks[i], x_breaks[i + 1], y_breaks[j],
                            y_breaks[j + 1], evals));
        }
    }

    while (total_err > tol_abs && evals < max_evals && queue.top().err > 0.0) {
        Cell2 c = queue.top();
        queue.pop();
        total -= c.fine;
        total_err -= c.err;
        const double xm = 0.5 * (c.x0 + c.x1), ym = 0.5 * (c.y0 + c.y1);
        make_cell(c.x0, xm, c.y0, ym, c.quarter[0]);
        make_cell(xm, c.x1, c.y0, ym, c.quarter[1]);
        make_cell(c.x0, xm, ym, c.y1, c.quarter[2]);
        make_cell(xm, c.x1, ym, c.y1, c.quarter[3]);
    }

    QuadResult r;
    r.evals = evals;
    while (!queue.empty()) {
        r.value += queue.top().fine;
        r.error += queue.top().err;
        queue.pop();
    }
    r.converged = r.error <= tol_abs;
    return r;
}

}  // namespace kgsq::quad
