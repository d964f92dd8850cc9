#pragma once
#include <string>

#include "fft.hpp"
#include "grid.hpp"

namespace kgsq {

class RealField {
public:
    RealField() = default;
    explicit RealField(const Grid& g) : grid_(g), v_(g.phys_size()) {}

    const Grid& grid() const { return grid_; }
    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    double& operator()(int i1, int i2) { return v_[grid_.phys_at(i1, i2)]; }
    double operator()(int i1, int i2) const { return v_[grid_.phys_at(i1, i2)]; }
    std::size_t size() const { return v_.size(); }

private:
    Grid grid_;
    FftwBuffer<double> v_;
};

// Scalar field in spectral representation. Coefficients follow the
// convention theta(x) = sum_k theta_hat(k) exp(i k.x); the k = 0 entry is
// the mean and is tracked separately from the Sobolev seminorms.
class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(const Grid& g) : grid_(g), c_(g.spec_size()) {}

    const Grid& grid() const { return grid_; }
    cplx* data() { return c_.data(); }
    const cplx* data() const { return c_.data(); }
    cplx& raw(int row, int col) { return c_[grid_.at(row, col)]; }
    const cplx& raw(int row, int col) const { return c_[grid_.at(row, col)]; }

    double mean() const { return c_[0].real(); }
    void set_mean(double m) { c_[0] = cplx(m, 0.0); }

    // Coefficient at signed integer frequency (m1, m2), resolving the
    // conjugate half plane.
    cplx coeff(int m1, int m2) const;
    // Adds c at (m1, m2) and conj(c) at (-m1, -m2); keeps the redundant
    // conjugate entries in the m2 = 0 and m2 = N/2 columns consistent.
    void add_mode(int m1, int m2, cplx c);

    void clear();
    // restore exact conjugate symmetry in the redundant columns and make
    // the self-conjugate entries real
    void enforce_hermitian();
    // drop |m_i| > floor(N/3)
    void dealias();
    // zero the m1 = -N/2 row and m2 = N/2 column (no signed partner)
    void zero_nyquist();

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);

private:
    Grid grid_;
    FftwBuffer<cplx> c_;
};

struct VectorField {
    SpectralField x;
    SpectralField y;

    VectorField() = default;
    explicit VectorField(const Grid& g) : x(g), y(g) {}
    const Grid& grid() const { return x.grid(); }
};

void to_physical(const SpectralField& f, RealField& out);
void to_spectral(const RealField& f, SpectralField& out);

// Binary checkpoint: magic "KGSQ", version, N, L, t, then the full N x N
// complex coefficient array row-major as little-endian f64 pairs.
void write_checkpoint(const std::string& path, const SpectralField& f, double time);
SpectralField read_checkpoint(const std::string& path, double* time_out);

} // namespace kgsq
