#include "field.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace kgsq {

cplx SpectralField::coeff(int m1, int m2) const {
    const int n = grid_.n;
    if (m2 < -n / 2 || m2 > n / 2 || m1 < -n / 2 || m1 > n / 2)
        throw std::out_of_range("coeff: frequency outside lattice");
    if (m2 >= 0) return raw(grid_.row_of_m(m1 == -n / 2 ? n / 2 : m1), m2);
    int mm1 = -m1;
    if (mm1 == -n / 2) mm1 = n / 2;
    return std::conj(raw(grid_.row_of_m(mm1), -m2));
}

void SpectralField::add_mode(int m1, int m2, cplx c) {
    if (m2 < 0 || (m2 == 0 && m1 < 0)) {
        add_mode(-m1, -m2, std::conj(c));
        return;
    }
    const int n = grid_.n;
    const int half = n / 2;
    if (m1 == 0 && m2 == 0) {
        c_[0] += 2.0 * c.real();
        return;
    }
    const int row = grid_.row_of_m(m1);
    if (m2 == 0 || m2 == half) {
        // conjugate partner lives in the same stored column
        const bool self = (m1 == 0 || m1 == half || m1 == -half);
        if (self) {
            raw(row == n ? 0 : row, m2) += 2.0 * c.real();
        } else {
            raw(row, m2) += c;
            raw(grid_.row_of_m(-m1), m2) += std::conj(c);
        }
    } else {
        raw(row, m2) += c;
    }
}

void SpectralField::clear() {
    std::memset(static_cast<void*>(c_.data()), 0, sizeof(cplx) * c_.size());
}

void SpectralField::enforce_hermitian() {
    const int n = grid_.n;
    const int half = n / 2;
    for (int col : {0, half}) {
        for (int m = 1; m < half; ++m) {
            const cplx a = raw(m, col);
            const cplx b = raw(n - m, col);
            const cplx avg = 0.5 * (a + std::conj(b));
            raw(m, col) = avg;
            raw(n - m, col) = std::conj(avg);
        }
        raw(0, col) = cplx(raw(0, col).real(), 0.0);
        raw(half, col) = cplx(raw(half, col).real(), 0.0);
    }
}

void SpectralField::dealias() {
    const int cut = grid_.dealias_m();
    const int hn = grid_.half();
    for (int row = 0; row < grid_.n; ++row) {
        const bool kill_row = std::abs(grid_.m_of_row(row)) > cut;
        for (int col = 0; col < hn; ++col) {
            if (kill_row || col > cut) c_[grid_.at(row, col)] = 0.0;
        }
    }
}

void SpectralField::zero_nyquist() {
    const int n = grid_.n;
    const int half = n / 2;
    const int hn = grid_.half();
    for (int col = 0; col < hn; ++col) c_[grid_.at(half, col)] = 0.0;
    for (int row = 0; row < n; ++row) c_[grid_.at(row, half)] = 0.0;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] *= s;
    return *this;
}

void to_physical(const SpectralField& f, RealField& out) {
    if (!f.grid().same(out.grid())) out = RealField(f.grid());
    fft::backward(f.grid().n, f.data(), out.data());
}

void to_spectral(const RealField& f, SpectralField& out) {
    if (!f.grid().same(out.grid())) out = SpectralField(f.grid());
    fft::forward(f.grid().n, f.data(), out.data());
    const double scale = 1.0 / (static_cast<double>(f.grid().n) * f.grid().n);
    for (std::size_t i = 0; i < f.grid().spec_size(); ++i) out.data()[i] *= scale;
}

namespace {

constexpr char kMagic[4] = {'K', 'G', 'S', 'Q'};
constexpr std::uint32_t kVersion = 1;

void put_f64(std::ofstream& os, double v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

double get_f64(std::ifstream& is) {
    double v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

} // namespace

void write_checkpoint(const std::string& path, const SpectralField& f, double time) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("checkpoint: cannot open " + path);
    const Grid& g = f.grid();
    os.write(kMagic, 4);
    os.write(reinterpret_cast<const char*>(&kVersion), sizeof kVersion);
    put_f64(os, static_cast<double>(g.n));
    put_f64(os, g.length);
    put_f64(os, time);
    // full N x N array row-major; columns above N/2 come from conjugates
    for (int row = 0; row < g.n; ++row) {
        for (int col = 0; col < g.n; ++col) {
            cplx c;
            if (col <= g.n / 2) {
                c = f.raw(row, col);
            } else {
                const int mrow = row == 0 ? 0 : g.n - row;
                c = std::conj(f.raw(mrow, g.n - col));
            }
            put_f64(os, c.real());
            put_f64(os, c.imag());
        }
    }
    if (!os) throw std::runtime_error("checkpoint: write failed for " + path);
}

SpectralField read_checkpoint(const std::string& path, double* time_out) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("checkpoint: bad magic in " + path);
    std::uint32_t version = 0;
    is.read(reinterpret_cast<char*>(&version), sizeof version);
    if (version != kVersion) throw std::runtime_error("checkpoint: unsupported version");
    const int n = static_cast<int>(get_f64(is));
    const double length = get_f64(is);
    const double t = get_f64(is);
    Grid g(n, length);
    SpectralField f(g);
    for (int row = 0; row < n; ++row) {
        for (int col = 0; col < n; ++col) {
            const double re = get_f64(is);
            const double im = get_f64(is);
            if (col <= n / 2) f.raw(row, col) = cplx(re, im);
        }
    }
    if (!is) throw std::runtime_error("checkpoint: truncated file " + path);
    if (time_out) *time_out = t;
    return f;
}

} // namespace kgsq
