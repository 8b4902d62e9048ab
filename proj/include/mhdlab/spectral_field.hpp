#pragma once

#include "mhdlab/grid.hpp"

#include <array>
#include <complex>
#include <utility>
#include <variant>
#include <vector>

namespace mhdlab {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;

/// Complex Fourier coefficients of a real scalar field on T^3 = [0,1]^3,
/// f(x) = sum_k coeff(k) exp(2 pi i k.x), stored over the full n^3 lattice in
/// FFT order. Real fields satisfy coeff(-k) = conj(coeff(k)).
struct SpectralField {
    Grid3 grid;
    std::vector<cplx> coeff;

    explicit SpectralField(const Grid3& g) : grid(g), coeff(g.size(), cplx(0.0, 0.0)) {}

    cplx& at(int k1, int k2, int k3) {
        return coeff[grid.flat(grid.storage_index(k1), grid.storage_index(k2), grid.storage_index(k3))];
    }
    cplx at(int k1, int k2, int k3) const {
        return coeff[grid.flat(grid.storage_index(k1), grid.storage_index(k2), grid.storage_index(k3))];
    }
};

/// Three scalar fields on one shared grid.
struct VectorSpectralField {
    std::array<SpectralField, 3> comp;

    explicit VectorSpectralField(const Grid3& g)
        : comp{SpectralField(g), SpectralField(g), SpectralField(g)} {}

    const Grid3& grid() const { return comp[0].grid; }
    SpectralField& operator[](int i) { return comp[i]; }
    const SpectralField& operator[](int i) const { return comp[i]; }
};

// Transforms (forward includes the 1/n^3 normalization).
SpectralField from_physical(const Grid3& g, const std::vector<double>& samples);
std::vector<double> to_physical(const SpectralField& f);
std::vector<cplx> to_physical_complex(const SpectralField& f);

// Mean mode and centering.
double mean_value(const SpectralField& f);
std::pair<double, SpectralField> mean_and_center(const SpectralField& f);

// Dealias-band truncation (zero every |k_axis| above grid.dealias_cutoff()).
void truncate_to_band(SpectralField& f);
void truncate_to_band(VectorSpectralField& v);
SpectralField truncated(const SpectralField& f);

double hermitian_defect(const SpectralField& f); // max |coeff(k) - conj(coeff(-k))|

// Fourier multiplier operators. Odd multipliers (gradient, divergence, curl,
// w_dot_grad, w_cross_grad, div_w) annihilate the unpaired Nyquist planes so
// real fields stay real; even multipliers act on the full lattice.
// lambda_pow: (2 pi |k|)^s with s >= 0; the k = 0 mode is annihilated for
// s > 0 and kept for s = 0 (Lambda^0 = identity).
SpectralField lambda_pow(const SpectralField& f, double s);
VectorSpectralField lambda_pow(const VectorSpectralField& v, double s);
VectorSpectralField gradient(const SpectralField& f);
SpectralField divergence(const VectorSpectralField& v);
VectorSpectralField curl(const VectorSpectralField& v);
SpectralField laplacian(const SpectralField& f);
VectorSpectralField laplacian(const VectorSpectralField& v);
SpectralField w_dot_grad(const SpectralField& f, const Vec3& w);
VectorSpectralField w_dot_grad(const VectorSpectralField& v, const Vec3& w);
VectorSpectralField w_cross_grad(const SpectralField& f, const Vec3& w); // (w x nabla) f
SpectralField laplacian_w(const SpectralField& f, const Vec3& w);        // -4 pi^2 |w x k|^2
VectorSpectralField laplacian_w(const VectorSpectralField& v, const Vec3& w);
SpectralField div_w(const VectorSpectralField& v, const Vec3& w);        // (w x nabla) . v

// Per mode k != 0 removes the component parallel to k; k = 0 unchanged.
VectorSpectralField leray_project(const VectorSpectralField& v);

// Pointwise products on the physical grid. dealiased_product applies the
// 2/3-rule truncation to inputs and output; pointwise_product applies none
// and is exact while the input bands sum below the Nyquist wavenumber.
SpectralField pointwise_product(const SpectralField& f, const SpectralField& g);
SpectralField dealiased_product(const SpectralField& f, const SpectralField& g);

// Norms and inner products (exact spectral quadrature).
double l2_norm(const SpectralField& f);
double l2_norm(const VectorSpectralField& v);
double sobolev_norm(const SpectralField& f, double s); // sum (1+4pi^2|k|^2)^s |c_k|^2, sqrt
double sobolev_norm(const VectorSpectralField& v, double s);
double linf_norm(const SpectralField& f); // physical-grid max abs
double inner_l2(const SpectralField& f, const SpectralField& g); // integral f g, real fields
double inner_l2(const VectorSpectralField& f, const VectorSpectralField& g);

SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator*(double c, const SpectralField& a);
VectorSpectralField operator+(const VectorSpectralField& a, const VectorSpectralField& b);
VectorSpectralField operator-(const VectorSpectralField& a, const VectorSpectralField& b);
VectorSpectralField operator*(double c, const VectorSpectralField& a);

/// One multiplier operator with its parameters, dispatched by apply_operator.
struct OperatorSpec {
    enum class Kind {
        lambda,
        gradient,
        divergence,
        curl,
        laplacian,
        w_dot_grad,
        w_cross_grad,
        laplacian_w,
        div_w,
    };
    Kind kind;
    double s = 0.0;
    Vec3 w{0.0, 0.0, 0.0};

    static OperatorSpec lambda(double s);
    static OperatorSpec plain(Kind k); // gradient, divergence, curl, laplacian
    static OperatorSpec with_w(Kind k, const Vec3& w);
};

using AnyField = std::variant<SpectralField, VectorSpectralField>;
AnyField apply_operator(const SpectralField& f, const OperatorSpec& op);
AnyField apply_operator(const VectorSpectralField& v, const OperatorSpec& op);

} // namespace mhdlab
