#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace kgsq {

template <class T>
void FftwBuffer<T>::allocate(std::size_t n) {
    release();
    if (n == 0) return;
    ptr_ = static_cast<T*>(fftw_malloc(sizeof(T) * n));
    if (!ptr_) throw std::bad_alloc();
    size_ = n;
    std::memset(static_cast<void*>(ptr_), 0, sizeof(T) * n);
}

template <class T>
void FftwBuffer<T>::release() {
    if (ptr_) fftw_free(ptr_);
    ptr_ = nullptr;
    size_ = 0;
}

template <class T>
FftwBuffer<T>& FftwBuffer<T>::operator=(const FftwBuffer<T>& o) {
    if (this == &o) return *this;
    allocate(o.size_);
    if (o.size_) std::memcpy(static_cast<void*>(ptr_), o.ptr_, sizeof(T) * o.size_);
    return *this;
}

template <class T>
FftwBuffer<T>& FftwBuffer<T>::operator=(FftwBuffer<T>&& o) noexcept {
    if (this == &o) return *this;
    release();
    ptr_ = o.ptr_;
    size_ = o.size_;
    o.ptr_ = nullptr;
    o.size_ = 0;
    return *this;
}

template class FftwBuffer<double>;
template class FftwBuffer<cplx>;

namespace fft {
namespace {

struct Plans {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
};

std::mutex g_mutex;
std::map<int, Plans>& table() {
    static std::map<int, Plans> t;
    return t;
}

// Plans are created with FFTW_ESTIMATE: plan selection is then a pure
// function of the problem size, which keeps reruns bit-identical.
Plans& plans_for(int n) {
    std::lock_guard<std::mutex> lock(g_mutex);
    auto& t = table();
    auto it = t.find(n);
    if (it != t.end()) return it->second;

    FftwBuffer<double> re(static_cast<std::size_t>(n) * n);
    FftwBuffer<cplx> sp(static_cast<std::size_t>(n) * (n / 2 + 1));
    Plans p;
    p.r2c = fftw_plan_dft_r2c_2d(n, n, re.data(),
                                 reinterpret_cast<fftw_complex*>(sp.data()),
                                 FFTW_ESTIMATE);
    p.c2r = fftw_plan_dft_c2r_2d(n, n, reinterpret_cast<fftw_complex*>(sp.data()),
                                 re.data(), FFTW_ESTIMATE);
    if (!p.r2c || !p.c2r) throw std::runtime_error("fftw plan creation failed");
    return t.emplace(n, p).first->second;
}

// Scratch reused per thread: the c2r transform clobbers its input and the
// r2c path must not write into the caller's array before reading it.
thread_local std::map<int, FftwBuffer<double>> g_real_scratch;
thread_local std::map<int, FftwBuffer<cplx>> g_cplx_scratch;

} // namespace

void forward(int n, const double* in, cplx* out) {
    Plans& p = plans_for(n);
    auto& scratch = g_real_scratch[n];
    if (scratch.size() == 0) scratch.allocate(static_cast<std::size_t>(n) * n);
    std::memcpy(scratch.data(), in, sizeof(double) * n * n);
    fftw_execute_dft_r2c(p.r2c, scratch.data(), reinterpret_cast<fftw_complex*>(out));
}

void backward(int n, const cplx* in, double* out) {
    Plans& p = plans_for(n);
    auto& scratch = g_cplx_scratch[n];
    const std::size_t m = static_cast<std::size_t>(n) * (n / 2 + 1);
    if (scratch.size() == 0) scratch.allocate(m);
    std::memcpy(static_cast<void*>(scratch.data()), in, sizeof(cplx) * m);
    fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out);
}

} // namespace fft
} // namespace kgsq
