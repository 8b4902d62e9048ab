#include "mhdlab/linear_analysis.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mhdlab {

namespace {

constexpr double two_pi = 6.28318530717958647692528676655900577;

using EMat = Eigen::Matrix<cplx, 6, 6>;
using EVec = Eigen::Matrix<cplx, 6, 1>;

EMat to_eigen(const Mat6& m) {
    EMat out;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) out(i, j) = m[i][j];
    return out;
}

} // namespace

ModeSystem::ModeSystem(const std::array<int, 3>& k_, const Vec3& w_, double beta_, double nu_)
    : k(k_), w(w_), beta(beta_), nu(nu_) {
    if (k[0] == 0 && k[1] == 0 && k[2] == 0)
        throw std::invalid_argument("ModeSystem: k must be nonzero");
    if (!(beta > 0.0)) throw std::invalid_argument("ModeSystem: beta must be positive");
    if (!(nu > 0.0)) throw std::invalid_argument("ModeSystem: nu must be positive");
    // deterministic orthonormal basis of the plane perpendicular to k: cross k
    // with the axis of smallest |k component|
    const double kd[3] = {double(k[0]), double(k[1]), double(k[2])};
    int axis = 0;
    for (int c = 1; c < 3; ++c)
        if (std::abs(kd[c]) < std::abs(kd[axis])) axis = c;
    Vec3 t{0.0, 0.0, 0.0};
    t[axis] = 1.0;
    Vec3 c1{kd[1] * t[2] - kd[2] * t[1], kd[2] * t[0] - kd[0] * t[2], kd[0] * t[1] - kd[1] * t[0]};
    const double n1 = std::sqrt(c1[0] * c1[0] + c1[1] * c1[1] + c1[2] * c1[2]);
    for (int c = 0; c < 3; ++c) e1[c] = c1[c] / n1;
    const double kn = std::sqrt(kd[0] * kd[0] + kd[1] * kd[1] + kd[2] * kd[2]);
    Vec3 kh{kd[0] / kn, kd[1] / kn, kd[2] / kn};
    e2 = {kh[1] * e1[2] - kh[2] * e1[1], kh[2] * e1[0] - kh[0] * e1[2],
          kh[0] * e1[1] - kh[1] * e1[0]};
}

Mat6 assemble_mode_matrix(const ModeSystem& ms) {
    Mat6 m{};
    const double kt[3] = {two_pi * ms.k[0], two_pi * ms.k[1], two_pi * ms.k[2]};
    const double kt_sq = kt[0] * kt[0] + kt[1] * kt[1] + kt[2] * kt[2];
    const double w_kt = ms.w[0] * kt[0] + ms.w[1] * kt[1] + ms.w[2] * kt[2];
    const Vec3* basis[2] = {&ms.e1, &ms.e2};
    const cplx I(0.0, 1.0);

    // a' = -i ktilde . u
    for (int j = 0; j < 3; ++j) m[0][1 + j] = -I * kt[j];

    // u_j' = -i beta kt_j a + sum_m h_m i [ (w.kt) e_m_j - kt_j (w.e_m) ]
    for (int j = 0; j < 3; ++j) {
        m[1 + j][0] = -I * ms.beta * kt[j];
        for (int b = 0; b < 2; ++b) {
            const Vec3& e = *basis[b];
            const double we = ms.w[0] * e[0] + ms.w[1] * e[1] + ms.w[2] * e[2];
            m[1 + j][4 + b] = I * (w_kt * e[j] - kt[j] * we);
        }
    }

    // h_b' = -nu |kt|^2 h_b + i (w.kt) (e_b . u) - i (e_b . w)(kt . u)
    for (int b = 0; b < 2; ++b) {
        const Vec3& e = *basis[b];
        const double we = ms.w[0] * e[0] + ms.w[1] * e[1] + ms.w[2] * e[2];
        m[4 + b][4 + b] = -ms.nu * kt_sq;
        for (int j = 0; j < 3; ++j) m[4 + b][1 + j] = I * (w_kt * e[j] - we * kt[j]);
    }
    return m;
}

Vec6 mat_apply(const Mat6& m, const Vec6& v) {
    Vec6 out{};
    for (int i = 0; i < 6; ++i) {
        cplx s(0.0, 0.0);
        for (int j = 0; j < 6; ++j) s += m[i][j] * v[j];
        out[i] = s;
    }
    return out;
}

SpectrumReport mode_spectrum(const ModeSystem& ms, double neutral_tol) {
    const Mat6 m = assemble_mode_matrix(ms);
    const EMat a = to_eigen(m);
    Eigen::ComplexEigenSolver<EMat> solver(a, true);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("mode_spectrum: eigenvalue iteration failed to converge");

    SpectrumReport rep;
    rep.neutral_tol = neutral_tol;
    std::array<int, 6> order{0, 1, 2, 3, 4, 5};
    const auto& vals = solver.eigenvalues();
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        if (vals(i).real() != vals(j).real()) return vals(i).real() < vals(j).real();
        return vals(i).imag() < vals(j).imag();
    });
    rep.max_residual = 0.0;
    rep.spectral_abscissa = -std::numeric_limits<double>::infinity();
    for (int idx : order) {
        EigenPair p;
        p.lambda = vals(idx);
        EVec v = solver.eigenvectors().col(idx);
        v.normalize();
        for (int i = 0; i < 6; ++i) p.v[i] = v(i);
        rep.max_residual = std::max(rep.max_residual, (a * v - p.lambda * v).norm());
        rep.spectral_abscissa = std::max(rep.spectral_abscissa, p.lambda.real());
        if (std::abs(p.lambda.real()) <= neutral_tol)
            rep.neutral.push_back(int(rep.pairs.size()));
        rep.pairs.push_back(std::move(p));
    }
    return rep;
}

BandScanReport band_spectrum_scan(const Vec3& w, double beta, double nu, int K, double neutral_tol,
                                  long budget) {
    if (K < 1) throw std::invalid_argument("band_spectrum_scan: K must be >= 1");
    const long count = (2L * K + 1) * (2L * K + 1) * (2L * K + 1);
    if (count > budget)
        throw std::runtime_error("band_spectrum_scan: band exceeds the configured budget");
    BandScanReport rep;
    rep.abscissa = -std::numeric_limits<double>::infinity();
    rep.argmax = {0, 0, 0};
    rep.neutral_modes = 0;
    const bool w_zero = (w[0] == 0.0 && w[1] == 0.0 && w[2] == 0.0);
    for (int k1 = -K; k1 <= K; ++k1)
        for (int k2 = -K; k2 <= K; ++k2)
            for (int k3 = -K; k3 <= K; ++k3) {
                const int ns = k1 * k1 + k2 * k2 + k3 * k3;
                if (ns == 0 || ns > K * K) continue;
                // w enters the generator linearly; w = 0 is handled by the
                // same assembly with the w-terms absent
                ModeSystem ms({k1, k2, k3}, w_zero ? Vec3{0.0, 0.0, 0.0} : w, beta, nu);
                const SpectrumReport sr = mode_spectrum(ms, neutral_tol);
                BandScanRow row{{k1, k2, k3}, sr.spectral_abscissa, 0.0,
                                int(sr.neutral.size())};
                for (const auto& p : sr.pairs)
                    if (p.lambda.real() == sr.spectral_abscissa) row.im_at_max = p.lambda.imag();
                rep.rows.push_back(row);
                if (row.neutral_count > 0) ++rep.neutral_modes;
                if (row.re_max > rep.abscissa) {
                    rep.abscissa = row.re_max;
                    rep.argmax = {k1, k2, k3};
                }
            }
    return rep;
}

PerturbationState evolve_linear(const PerturbationState& initial, const Vec3& w, double beta,
                                double nu, double t) {
    const ConstraintResiduals r = constraint_residuals(initial);
    if (r.div_h_l2 > 1e-10)
        throw std::invalid_argument("evolve_linear: initial h is not divergence free");
    if (r.mass > 1e-10 || std::abs(r.momentum[0]) > 1e-10 || std::abs(r.momentum[1]) > 1e-10 ||
        std::abs(r.momentum[2]) > 1e-10 || std::abs(r.mean_h[0]) > 1e-10 ||
        std::abs(r.mean_h[1]) > 1e-10 || std::abs(r.mean_h[2]) > 1e-10)
        throw std::invalid_argument("evolve_linear: initial means must vanish");

    const Grid3& g = initial.grid();
    PerturbationState out(g);
    out.time = initial.time + t;
    const int n = g.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) {
                const int k1 = g.wavenumber(i), k2 = g.wavenumber(j), k3 = g.wavenumber(l);
                const long idx = g.flat(i, j, l);
                if (k1 == 0 && k2 == 0 && k3 == 0) continue;
                const cplx a0 = initial.a.coeff[idx];
                const cplx u0[3] = {initial.u[0].coeff[idx], initial.u[1].coeff[idx],
                                    initial.u[2].coeff[idx]};
                const cplx h0[3] = {initial.h[0].coeff[idx], initial.h[1].coeff[idx],
                                    initial.h[2].coeff[idx]};
                if (a0 == cplx(0.0) && u0[0] == cplx(0.0) && u0[1] == cplx(0.0) &&
                    u0[2] == cplx(0.0) && h0[0] == cplx(0.0) && h0[1] == cplx(0.0) &&
                    h0[2] == cplx(0.0))
                    continue;

                ModeSystem ms({k1, k2, k3}, w, beta, nu);
                EVec y;
                y(0) = a0;
                for (int c = 0; c < 3; ++c) y(1 + c) = u0[c];
                y(4) = h0[0] * ms.e1[0] + h0[1] * ms.e1[1] + h0[2] * ms.e1[2];
                y(5) = h0[0] * ms.e2[0] + h0[1] * ms.e2[1] + h0[2] * ms.e2[2];

                const EMat at = to_eigen(assemble_mode_matrix(ms)) * cplx(t, 0.0);
                const EVec yt = at.exp() * y;

                out.a.coeff[idx] = yt(0);
                for (int c = 0; c < 3; ++c) {
                    out.u[c].coeff[idx] = yt(1 + c);
                    out.h[c].coeff[idx] = yt(4) * ms.e1[c] + yt(5) * ms.e2[c];
                }
            }
    return out;
}

std::vector<double> wave_identity_residual(const std::vector<PerturbationState>& traj,
                                           const Vec3& w, double beta) {
    if (traj.size() < 3)
        throw std::invalid_argument("wave_identity_residual: needs at least 3 samples");
    const double dt = traj[1].time - traj[0].time;
    for (std::size_t i = 1; i < traj.size(); ++i)
        if (std::abs(traj[i].time - traj[i - 1].time - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
            throw std::invalid_argument("wave_identity_residual: sampling must be uniform");

    const Grid3& g = traj[0].grid();
    auto hw = [&](const PerturbationState& s) {
        SpectralField f(g);
        for (int c = 0; c < 3; ++c)
            for (long i = 0; i < g.size(); ++i) f.coeff[i] += w[c] * s.h[c].coeff[i];
        return f;
    };

    std::vector<double> res;
    const double wsq = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
        const SpectralField hm = hw(traj[i - 1]);
        const SpectralField h0 = hw(traj[i]);
        const SpectralField hp = hw(traj[i + 1]);
        const SpectralField dtt = (1.0 / (dt * dt)) * (hp - 2.0 * h0 + hm);
        const SpectralField dt1 = (0.5 / dt) * (hp - hm);
        SpectralField r = dtt - laplacian(dt1) - wsq * laplacian(h0) - beta * laplacian_w(traj[i].a, w);
        res.push_back(l2_norm(r));
    }
    return res;
}

} // namespace mhdlab
