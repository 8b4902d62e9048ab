#include "mhdlab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <stdexcept>

namespace mhdlab {

struct Fft3::Impl {
    int n;
    long size;
    fftw_complex* in;
    fftw_complex* out;
    fftw_plan fwd;
    fftw_plan bwd;
};

Fft3::Fft3(int n) {
    impl_ = new Impl;
    impl_->n = n;
    impl_->size = static_cast<long>(n) * n * n;
    impl_->in = fftw_alloc_complex(impl_->size);
    impl_->out = fftw_alloc_complex(impl_->size);
    if (!impl_->in || !impl_->out) throw std::bad_alloc();
    impl_->fwd = fftw_plan_dft_3d(n, n, n, impl_->in, impl_->out, FFTW_FORWARD, FFTW_ESTIMATE);
    impl_->bwd = fftw_plan_dft_3d(n, n, n, impl_->in, impl_->out, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!impl_->fwd || !impl_->bwd) throw std::runtime_error("Fft3: fftw plan creation failed");
}

Fft3::~Fft3() {
    fftw_destroy_plan(impl_->fwd);
    fftw_destroy_plan(impl_->bwd);
    fftw_free(impl_->in);
    fftw_free(impl_->out);
    delete impl_;
}

Fft3& Fft3::get(int n) {
    static std::map<int, std::unique_ptr<Fft3>> cache;
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, std::unique_ptr<Fft3>(new Fft3(n))).first;
    return *it->second;
}

void Fft3::forward(const double* phys, std::complex<double>* coeff) const {
    const long m = impl_->size;
    for (long i = 0; i < m; ++i) {
        impl_->in[i][0] = phys[i];
        impl_->in[i][1] = 0.0;
    }
    fftw_execute(impl_->fwd);
    const double scale = 1.0 / static_cast<double>(m);
    for (long i = 0; i < m; ++i)
        coeff[i] = std::complex<double>(impl_->out[i][0] * scale, impl_->out[i][1] * scale);
}

void Fft3::inverse(const std::complex<double>* coeff, double* phys) const {
    const long m = impl_->size;
    for (long i = 0; i < m; ++i) {
        impl_->in[i][0] = coeff[i].real();
        impl_->in[i][1] = coeff[i].imag();
    }
    fftw_execute(impl_->bwd);
    for (long i = 0; i < m; ++i) phys[i] = impl_->out[i][0];
}

void Fft3::inverse_complex(const std::complex<double>* coeff, std::complex<double>* out) const {
    const long m = impl_->size;
    for (long i = 0; i < m; ++i) {
        impl_->in[i][0] = coeff[i].real();
        impl_->in[i][1] = coeff[i].imag();
    }
    fftw_execute(impl_->bwd);
    for (long i = 0; i < m; ++i)
        out[i] = std::complex<double>(impl_->out[i][0], impl_->out[i][1]);
}

} // namespace mhdlab
