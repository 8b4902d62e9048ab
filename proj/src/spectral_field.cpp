#include "mhdlab/spectral_field.hpp"

#include "mhdlab/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace mhdlab {

namespace {

constexpr double two_pi = 6.28318530717958647692528676655900577;

void require_same_grid(const Grid3& a, const Grid3& b) {
    if (a != b) throw std::invalid_argument("spectral operation on mismatched grids");
}

bool on_nyquist(const Grid3& g, int i, int j, int l) {
    const int ny = g.n / 2;
    return i == ny || j == ny || l == ny;
}

// Applies out(k) = factor(k) * in(k). Odd multipliers must pass
// zero_nyquist = true so the unpaired k = -n/2 planes stay real-compatible.
template <class F>
SpectralField map_modes(const SpectralField& in, bool zero_nyquist, F&& factor) {
    SpectralField out(in.grid);
    const Grid3& g = in.grid;
    long idx = 0;
    for (int i = 0; i < g.n; ++i) {
        const int k1 = g.wavenumber(i);
        for (int j = 0; j < g.n; ++j) {
            const int k2 = g.wavenumber(j);
            for (int l = 0; l < g.n; ++l, ++idx) {
                const int k3 = g.wavenumber(l);
                if (zero_nyquist && on_nyquist(g, i, j, l)) continue;
                out.coeff[idx] = factor(k1, k2, k3) * in.coeff[idx];
            }
        }
    }
    return out;
}

Vec3 cross_wk(const Vec3& w, int k1, int k2, int k3) {
    return {w[1] * k3 - w[2] * k2, w[2] * k1 - w[0] * k3, w[0] * k2 - w[1] * k1};
}

void require_nonzero(const Vec3& w) {
    if (w[0] == 0.0 && w[1] == 0.0 && w[2] == 0.0)
        throw std::invalid_argument("operator requires a nonzero vector w");
}

} // namespace

SpectralField from_physical(const Grid3& g, const std::vector<double>& samples) {
    if (static_cast<long>(samples.size()) != g.size())
        throw std::invalid_argument("from_physical: sample count does not match n^3");
    SpectralField f(g);
    Fft3::get(g.n).forward(samples.data(), f.coeff.data());
    return f;
}

std::vector<double> to_physical(const SpectralField& f) {
    std::vector<double> out(f.grid.size());
    Fft3::get(f.grid.n).inverse(f.coeff.data(), out.data());
    return out;
}

std::vector<cplx> to_physical_complex(const SpectralField& f) {
    std::vector<cplx> out(f.grid.size());
    Fft3::get(f.grid.n).inverse_complex(f.coeff.data(), out.data());
    return out;
}

double mean_value(const SpectralField& f) { return f.coeff[0].real(); }

std::pair<double, SpectralField> mean_and_center(const SpectralField& f) {
    SpectralField c = f;
    const double mean = c.coeff[0].real();
    c.coeff[0] = cplx(0.0, 0.0);
    return {mean, std::move(c)};
}

void truncate_to_band(SpectralField& f) {
    const Grid3& g = f.grid;
    const int kc = g.dealias_cutoff();
    long idx = 0;
    for (int i = 0; i < g.n; ++i) {
        const int a1 = std::abs(g.wavenumber(i));
        for (int j = 0; j < g.n; ++j) {
            const int a2 = std::abs(g.wavenumber(j));
            for (int l = 0; l < g.n; ++l, ++idx) {
                if (a1 > kc || a2 > kc || std::abs(g.wavenumber(l)) > kc)
                    f.coeff[idx] = cplx(0.0, 0.0);
            }
        }
    }
}

void truncate_to_band(VectorSpectralField& v) {
    for (auto& c : v.comp) truncate_to_band(c);
}

SpectralField truncated(const SpectralField& f) {
    SpectralField out = f;
    truncate_to_band(out);
    return out;
}

double hermitian_defect(const SpectralField& f) {
    const Grid3& g = f.grid;
    double worst = 0.0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            for (int l = 0; l < g.n; ++l) {
                const cplx a = f.coeff[g.flat(i, j, l)];
                const cplx b = f.coeff[g.flat((g.n - i) % g.n, (g.n - j) % g.n, (g.n - l) % g.n)];
                worst = std::max(worst, std::abs(a - std::conj(b)));
            }
    return worst;
}

SpectralField lambda_pow(const SpectralField& f, double s) {
    if (s < 0.0) throw std::invalid_argument("lambda_pow: s must be >= 0");
    return map_modes(f, false, [s](int k1, int k2, int k3) -> cplx {
        const double k2abs = double(k1) * k1 + double(k2) * k2 + double(k3) * k3;
        if (k2abs == 0.0) return s == 0.0 ? 1.0 : 0.0;
        return std::pow(two_pi * std::sqrt(k2abs), s);
    });
}

VectorSpectralField lambda_pow(const VectorSpectralField& v, double s) {
    VectorSpectralField out(v.grid());
    for (int i = 0; i < 3; ++i) out[i] = lambda_pow(v[i], s);
    return out;
}

VectorSpectralField gradient(const SpectralField& f) {
    VectorSpectralField out(f.grid);
    for (int c = 0; c < 3; ++c)
        out[c] = map_modes(f, true, [c](int k1, int k2, int k3) -> cplx {
            const int k[3] = {k1, k2, k3};
            return cplx(0.0, two_pi * k[c]);
        });
    return out;
}

SpectralField divergence(const VectorSpectralField& v) {
    SpectralField out(v.grid());
    for (int c = 0; c < 3; ++c) {
        SpectralField d = map_modes(v[c], true, [c](int k1, int k2, int k3) -> cplx {
            const int k[3] = {k1, k2, k3};
            return cplx(0.0, two_pi * k[c]);
        });
        for (long i = 0; i < out.grid.size(); ++i) out.coeff[i] += d.coeff[i];
    }
    return out;
}

VectorSpectralField curl(const VectorSpectralField& v) {
    const Grid3& g = v.grid();
    VectorSpectralField out(g);
    auto deriv = [&](const SpectralField& f, int c) {
        return map_modes(f, true, [c](int k1, int k2, int k3) -> cplx {
            const int k[3] = {k1, k2, k3};
            return cplx(0.0, two_pi * k[c]);
        });
    };
    SpectralField d2v3 = deriv(v[2], 1), d3v2 = deriv(v[1], 2);
    SpectralField d3v1 = deriv(v[0], 2), d1v3 = deriv(v[2], 0);
    SpectralField d1v2 = deriv(v[1], 0), d2v1 = deriv(v[0], 1);
    out[0] = d2v3 - d3v2;
    out[1] = d3v1 - d1v3;
    out[2] = d1v2 - d2v1;
    return out;
}

SpectralField laplacian(const SpectralField& f) {
    return map_modes(f, false, [](int k1, int k2, int k3) -> cplx {
        const double k2abs = double(k1) * k1 + double(k2) * k2 + double(k3) * k3;
        return -two_pi * two_pi * k2abs;
    });
}

VectorSpectralField laplacian(const VectorSpectralField& v) {
    VectorSpectralField out(v.grid());
    for (int i = 0; i < 3; ++i) out[i] = laplacian(v[i]);
    return out;
}

SpectralField w_dot_grad(const SpectralField& f, const Vec3& w) {
    require_nonzero(w);
    return map_modes(f, true, [&w](int k1, int k2, int k3) -> cplx {
        return cplx(0.0, two_pi * (w[0] * k1 + w[1] * k2 + w[2] * k3));
    });
}

VectorSpectralField w_dot_grad(const VectorSpectralField& v, const Vec3& w) {
    VectorSpectralField out(v.grid());
    for (int i = 0; i < 3; ++i) out[i] = w_dot_grad(v[i], w);
    return out;
}

VectorSpectralField w_cross_grad(const SpectralField& f, const Vec3& w) {
    require_nonzero(w);
    VectorSpectralField out(f.grid);
    for (int c = 0; c < 3; ++c)
        out[c] = map_modes(f, true, [&w, c](int k1, int k2, int k3) -> cplx {
            return cplx(0.0, two_pi * cross_wk(w, k1, k2, k3)[c]);
        });
    return out;
}

SpectralField laplacian_w(const SpectralField& f, const Vec3& w) {
    require_nonzero(w);
    return map_modes(f, false, [&w](int k1, int k2, int k3) -> cplx {
        const Vec3 c = cross_wk(w, k1, k2, k3);
        return -two_pi * two_pi * (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
    });
}

VectorSpectralField laplacian_w(const VectorSpectralField& v, const Vec3& w) {
    VectorSpectralField out(v.grid());
    for (int i = 0; i < 3; ++i) out[i] = laplacian_w(v[i], w);
    return out;
}

SpectralField div_w(const VectorSpectralField& v, const Vec3& w) {
    require_nonzero(w);
    SpectralField out(v.grid());
    for (int c = 0; c < 3; ++c) {
        SpectralField d = map_modes(v[c], true, [&w, c](int k1, int k2, int k3) -> cplx {
            return cplx(0.0, two_pi * cross_wk(w, k1, k2, k3)[c]);
        });
        for (long i = 0; i < out.grid.size(); ++i) out.coeff[i] += d.coeff[i];
    }
    return out;
}

VectorSpectralField leray_project(const VectorSpectralField& v) {
    const Grid3& g = v.grid();
    VectorSpectralField out = v;
    long idx = 0;
    for (int i = 0; i < g.n; ++i) {
        const double k1 = g.wavenumber(i);
        for (int j = 0; j < g.n; ++j) {
            const double k2 = g.wavenumber(j);
            for (int l = 0; l < g.n; ++l, ++idx) {
                const double k3 = g.wavenumber(l);
                const double ksq = k1 * k1 + k2 * k2 + k3 * k3;
                if (ksq == 0.0) continue;
                const cplx kv = (k1 * out[0].coeff[idx] + k2 * out[1].coeff[idx] + k3 * out[2].coeff[idx]) / ksq;
                out[0].coeff[idx] -= k1 * kv;
                out[1].coeff[idx] -= k2 * kv;
                out[2].coeff[idx] -= k3 * kv;
            }
        }
    }
    return out;
}

SpectralField pointwise_product(const SpectralField& f, const SpectralField& g) {
    require_same_grid(f.grid, g.grid);
    std::vector<double> a = to_physical(f);
    const std::vector<double> b = to_physical(g);
    for (long i = 0; i < f.grid.size(); ++i) a[i] *= b[i];
    return from_physical(f.grid, a);
}

SpectralField dealiased_product(const SpectralField& f, const SpectralField& g) {
    require_same_grid(f.grid, g.grid);
    SpectralField out = pointwise_product(truncated(f), truncated(g));
    truncate_to_band(out);
    return out;
}

double l2_norm(const SpectralField& f) {
    double sum = 0.0;
    for (const cplx& c : f.coeff) sum += std::norm(c);
    return std::sqrt(sum);
}

double l2_norm(const VectorSpectralField& v) {
    double sum = 0.0;
    for (const auto& c : v.comp)
        for (const cplx& z : c.coeff) sum += std::norm(z);
    return std::sqrt(sum);
}

namespace {
double sobolev_sq(const SpectralField& f, double s) {
    const Grid3& g = f.grid;
    double sum = 0.0;
    long idx = 0;
    for (int i = 0; i < g.n; ++i) {
        const double k1 = g.wavenumber(i);
        for (int j = 0; j < g.n; ++j) {
            const double k2 = g.wavenumber(j);
            for (int l = 0; l < g.n; ++l, ++idx) {
                const double k3 = g.wavenumber(l);
                const double ksq = k1 * k1 + k2 * k2 + k3 * k3;
                sum += std::pow(1.0 + two_pi * two_pi * ksq, s) * std::norm(f.coeff[idx]);
            }
        }
    }
    return sum;
}
} // namespace

double sobolev_norm(const SpectralField& f, double s) { return std::sqrt(sobolev_sq(f, s)); }

double sobolev_norm(const VectorSpectralField& v, double s) {
    return std::sqrt(sobolev_sq(v[0], s) + sobolev_sq(v[1], s) + sobolev_sq(v[2], s));
}

double linf_norm(const SpectralField& f) {
    const std::vector<double> p = to_physical(f);
    double m = 0.0;
    for (double x : p) m = std::max(m, std::abs(x));
    return m;
}

double inner_l2(const SpectralField& f, const SpectralField& g) {
    require_same_grid(f.grid, g.grid);
    double sum = 0.0;
    for (long i = 0; i < f.grid.size(); ++i)
        sum += (f.coeff[i] * std::conj(g.coeff[i])).real();
    return sum;
}

double inner_l2(const VectorSpectralField& f, const VectorSpectralField& g) {
    return inner_l2(f[0], g[0]) + inner_l2(f[1], g[1]) + inner_l2(f[2], g[2]);
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
    require_same_grid(a.grid, b.grid);
    SpectralField out = a;
    for (long i = 0; i < a.grid.size(); ++i) out.coeff[i] += b.coeff[i];
    return out;
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
    require_same_grid(a.grid, b.grid);
    SpectralField out = a;
    for (long i = 0; i < a.grid.size(); ++i) out.coeff[i] -= b.coeff[i];
    return out;
}

SpectralField operator*(double c, const SpectralField& a) {
    SpectralField out = a;
    for (auto& z : out.coeff) z *= c;
    return out;
}

VectorSpectralField operator+(const VectorSpectralField& a, const VectorSpectralField& b) {
    VectorSpectralField out(a.grid());
    for (int i = 0; i < 3; ++i) out[i] = a[i] + b[i];
    return out;
}

VectorSpectralField operator-(const VectorSpectralField& a, const VectorSpectralField& b) {
    VectorSpectralField out(a.grid());
    for (int i = 0; i < 3; ++i) out[i] = a[i] - b[i];
    return out;
}

VectorSpectralField operator*(double c, const VectorSpectralField& a) {
    VectorSpectralField out(a.grid());
    for (int i = 0; i < 3; ++i) out[i] = c * a[i];
    return out;
}

OperatorSpec OperatorSpec::lambda(double s) {
    if (s < 0.0) throw std::invalid_argument("OperatorSpec: lambda(s) requires s >= 0");
    OperatorSpec op;
    op.kind = Kind::lambda;
    op.s = s;
    return op;
}

OperatorSpec OperatorSpec::plain(Kind k) {
    OperatorSpec op;
    op.kind = k;
    return op;
}

OperatorSpec OperatorSpec::with_w(Kind k, const Vec3& w) {
    require_nonzero(w);
    OperatorSpec op;
    op.kind = k;
    op.w = w;
    return op;
}

AnyField apply_operator(const SpectralField& f, const OperatorSpec& op) {
    using K = OperatorSpec::Kind;
    switch (op.kind) {
        case K::lambda: return lambda_pow(f, op.s);
        case K::gradient: return gradient(f);
        case K::laplacian: return laplacian(f);
        case K::w_dot_grad: return w_dot_grad(f, op.w);
        case K::w_cross_grad: return w_cross_grad(f, op.w);
        case K::laplacian_w: return laplacian_w(f, op.w);
        case K::divergence:
        case K::curl:
        case K::div_w:
            throw std::invalid_argument("apply_operator: operator requires a vector field");
    }
    throw std::logic_error("apply_operator: unknown operator kind");
}

AnyField apply_operator(const VectorSpectralField& v, const OperatorSpec& op) {
    using K = OperatorSpec::Kind;
    switch (op.kind) {
        case K::lambda: return lambda_pow(v, op.s);
        case K::divergence: return divergence(v);
        case K::curl: return curl(v);
        case K::laplacian: return laplacian(v);
        case K::w_dot_grad: return w_dot_grad(v, op.w);
        case K::laplacian_w: return laplacian_w(v, op.w);
        case K::div_w: return div_w(v, op.w);
        case K::gradient:
        case K::w_cross_grad:
            throw std::invalid_argument("apply_operator: operator requires a scalar field");
    }
    throw std::logic_error("apply_operator: unknown operator kind");
}

} // namespace mhdlab
