#pragma once

#include <complex>

namespace mhdlab {

/// 3D discrete Fourier transform on the n^3 grid, convention
///   coeff(k) = n^-3 sum_x f(x) exp(-2 pi i k.x),   f(x) = sum_k coeff(k) exp(+2 pi i k.x),
/// so that nabla maps to multiplication by 2 pi i k. Plans are cached per n and
/// created with FFTW_ESTIMATE, which keeps results bit-reproducible across runs.
/// Not thread safe: each instance owns its transform buffers.
class Fft3 {
public:
    static Fft3& get(int n);

    void forward(const double* phys, std::complex<double>* coeff) const;
    void inverse(const std::complex<double>* coeff, double* phys) const;
    // Full complex inverse, for checking that produced fields are real.
    void inverse_complex(const std::complex<double>* coeff, std::complex<double>* out) const;

    ~Fft3();
    Fft3(const Fft3&) = delete;
    Fft3& operator=(const Fft3&) = delete;

private:
    explicit Fft3(int n);
    struct Impl;
    Impl* impl_;
};

} // namespace mhdlab
