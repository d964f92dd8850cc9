#pragma once
#include <complex>
#include <cstddef>

namespace kgsq {

// Aligned buffer backed by fftw_malloc so new-array execution keeps SIMD
// alignment consistent with the cached plans.
template <class T>
class FftwBuffer {
public:
    FftwBuffer() = default;
    explicit FftwBuffer(std::size_t n) { allocate(n); }
    FftwBuffer(const FftwBuffer& o) { *this = o; }
    FftwBuffer& operator=(const FftwBuffer& o);
    FftwBuffer(FftwBuffer&& o) noexcept : ptr_(o.ptr_), size_(o.size_) {
        o.ptr_ = nullptr;
        o.size_ = 0;
    }
    FftwBuffer& operator=(FftwBuffer&& o) noexcept;
    ~FftwBuffer() { release(); }

    void allocate(std::size_t n);
    void release();

    T* data() { return ptr_; }
    const T* data() const { return ptr_; }
    T& operator[](std::size_t i) { return ptr_[i]; }
    const T& operator[](std::size_t i) const { return ptr_[i]; }
    std::size_t size() const { return size_; }

private:
    T* ptr_ = nullptr;
    std::size_t size_ = 0;
};

using cplx = std::complex<double>;

// Plan cache keyed by N; plans are created once under a lock and executed
// with the new-array interface, which is safe to call concurrently.
namespace fft {

// real N*N field -> complex N*(N/2+1) coefficients (unnormalized DFT).
void forward(int n, const double* in, cplx* out);
// complex N*(N/2+1) -> real N*N. Destroys the input copy internally, the
// caller's coefficients are left untouched.
void backward(int n, const cplx* in, double* out);

} // namespace fft
} // namespace kgsq
