#pragma once

#include "mhdlab/state.hpp"

#include <array>
#include <complex>
#include <vector>

namespace mhdlab {

/// One Fourier mode of the linearized system, reduced to 6 dimensions:
/// state (a, u1, u2, u3, h.e1, h.e2) with {e1, e2} an orthonormal pair
/// spanning the plane perpendicular to k (so div h = 0 is built in).
struct ModeSystem {
    std::array<int, 3> k;
    Vec3 w;
    double beta;
    double nu;
    Vec3 e1, e2;

    ModeSystem(const std::array<int, 3>& k_, const Vec3& w_, double beta_, double nu_);
};

using Mat6 = std::array<std::array<cplx, 6>, 6>; // row-major
using Vec6 = std::array<cplx, 6>;

/// Linearized generator on the reduced mode state, with ktilde = 2 pi k:
///   a' = -i ktilde . u
///   u' = -i beta ktilde a + i (w.ktilde) h - i ktilde (w.h)
///   h' = -nu |ktilde|^2 h + i (w.ktilde) u - i w (ktilde.u),  h = h1 e1 + h2 e2
Mat6 assemble_mode_matrix(const ModeSystem& ms);

Vec6 mat_apply(const Mat6& m, const Vec6& v);

struct EigenPair {
    cplx lambda;
    Vec6 v; // unit eigenvector
};

struct SpectrumReport {
    std::vector<EigenPair> pairs; // sorted by (Re, Im)
    double spectral_abscissa;
    std::vector<int> neutral; // indices into pairs with |Re lambda| <= neutral_tol
    double max_residual;      // max ||A v - lambda v||
    double neutral_tol;
};
SpectrumReport mode_spectrum(const ModeSystem& ms, double neutral_tol = 1e-10);

struct BandScanRow {
    std::array<int, 3> k;
    double re_max;
    double im_at_max;
    int neutral_count;
};

struct BandScanReport {
    std::vector<BandScanRow> rows; // lattice order over 0 < |k| <= K
    double abscissa;
    std::array<int, 3> argmax;
    long neutral_modes; // modes carrying at least one neutral direction
};
BandScanReport band_spectrum_scan(const Vec3& w, double beta, double nu, int K,
                                  double neutral_tol = 1e-10, long budget = 300'000'000);

/// Exact evolution of the linearized system by per-mode matrix exponentials.
/// Requires div h = 0 and zero means on the input.
PerturbationState evolve_linear(const PerturbationState& initial, const Vec3& w, double beta,
                                double nu, double t);

/// L2 residual of d_tt(h.w) - Lap d_t(h.w) - |w|^2 Lap (h.w) - beta Lap_w a = 0
/// over the interior samples of a uniformly spaced trajectory, with order-2
/// centered differences in time and spectral derivatives in space.
std::vector<double> wave_identity_residual(const std::vector<PerturbationState>& traj,
                                           const Vec3& w, double beta);

} // namespace mhdlab
