#pragma once
#include <cmath>
#include <stdexcept>

namespace kgsq {

// Uniform periodic grid on [0, L)^2, N x N collocation points.
// Spectral storage is the r2c half plane: rows m1 = 0..N-1 (signed via
// wrap-around), columns m2 = 0..N/2; the missing half is the complex
// conjugate. Wavenumbers are k = (2*pi/L) * m.
struct Grid {
    int n = 0;
    double length = 0.0;

    Grid() = default;
    Grid(int n_, double length_) : n(n_), length(length_) {
        if (n < 8 || n % 2 != 0) throw std::invalid_argument("grid: N must be even and >= 8");
        if (!(length > 0.0)) throw std::invalid_argument("grid: L must be positive");
    }

    int half() const { return n / 2 + 1; }
    int nyquist() const { return n / 2; }
    int dealias_m() const { return n / 3; }  // two-thirds rule, |m_i| <= floor(N/3)
    double dk() const { return 2.0 * M_PI / length; }
    double dx() const { return length / n; }
    double cell_area() const { return dx() * dx(); }

    std::size_t spec_size() const { return static_cast<std::size_t>(n) * half(); }
    std::size_t phys_size() const { return static_cast<std::size_t>(n) * n; }

    // signed integer frequency of row index i
    int m_of_row(int i) const { return i <= n / 2 ? i : i - n; }
    int row_of_m(int m) const { return m >= 0 ? m : m + n; }

    double k1(int row) const { return dk() * m_of_row(row); }
    double k2(int col) const { return dk() * col; }

    std::size_t at(int row, int col) const {
        return static_cast<std::size_t>(row) * half() + col;
    }
    std::size_t phys_at(int i1, int i2) const {
        return static_cast<std::size_t>(i1) * n + i2;
    }

    bool same(const Grid& o) const { return n == o.n && length == o.length; }
};

} // namespace kgsq
