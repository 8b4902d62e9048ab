#pragma once

#include "mhdlab/pressure.hpp"
#include "mhdlab/state.hpp"

#include <array>
#include <string>
#include <vector>

namespace mhdlab {

/// Derivative-order bookkeeping (L, M, N, d integers, r real). The decay
/// theory needs r+3 <= L <= M-r-1, M <= N-r-2, d > 2(N+r-L); the relaxed
/// preset below exercises the same functional structure at desk scale.
struct OrderParams {
    int L = 1;
    int M = 2;
    int N = 3;
    int d = 7;
    double r = 1.0;

    void validate() const;           // structural sanity (positivity, M-r-1 >= 0, L-r >= 0)
    bool asymptotic_regime() const;  // the decay-theory order inequalities
};

OrderParams relaxed_orders(); // L=1, M=2, N=3, r=1, d=7 (outside the asymptotic regime)

/// E_j = ||a, u, h||_j^2 (squared inhomogeneous Sobolev norms).
double sobolev_energy(const PerturbationState& s, double j);

/// (1/2) int (rho |u|^2 + |h|^2 + e(rho)).
double physical_energy(const PerturbationState& s, const PressureLaw& pl);
double dissipation_rate(const PerturbationState& s); // int |grad h|^2

/// X tilde: int e(rho) + sum_{s=1..N} ||sqrt(p'/rho) Lambda^s a||_0^2
///          + sum_{s=0..N} (||sqrt(rho) Lambda^s u||_0^2 + ||Lambda^s h||_0^2),
/// weights evaluated pointwise on the physical grid.
double weighted_energy(const PerturbationState& s, const PressureLaw& pl, int N);

/// The three sign-indefinite cross integrals:
///   cross1 = int Lambda^{M-r-1} div u . Lambda^{M-r-1} a
///   cross2 = int (w.grad) Lambda^L h . Lambda^L u
///   cross3 = int [div_w Lambda^M (u x w) Lambda^M a + Lambda^M (h.w) div Lambda^M u]
std::array<double, 3> cross_functionals(const PerturbationState& s, const Vec3& w,
                                        const OrderParams& orders);

struct CompositeX {
    double X;
    double X_tilde;
    double e_n; // E_N of the same state
    std::array<double, 3> cross;
    double delta_used;
    bool bracket_ok; // (alpha1/2) E_N <= X <= 2 alpha2 E_N
};

/// X = X_tilde + delta (w1 cross1 + w2 cross2 + w3 cross3). With auto_shrink,
/// delta is halved until the bracket holds (it always does at delta -> 0).
CompositeX composite_X(const PerturbationState& s, const PressureLaw& pl, const Vec3& w,
                       const OrderParams& orders, double delta_star, const Vec3& weights,
                       bool auto_shrink = true);

/// One time sample of every diagnostic functional; maps 1:1 onto the CSV row.
struct EnergyReport {
    double t = 0.0;
    double e_phys = 0.0;
    double dissipation = 0.0;
    double e0 = 0.0, e1 = 0.0, e3 = 0.0, eN = 0.0;
    double x_tilde = 0.0;
    std::array<double, 3> cross{0.0, 0.0, 0.0};
    double X = 0.0;
    double mass_residual = 0.0;
    Vec3 momentum_residual{0.0, 0.0, 0.0};
    Vec3 mean_h_residual{0.0, 0.0, 0.0};
    double div_h_l2 = 0.0;
    double rho_min = 1.0, rho_max = 1.0;
    double delta_used = 0.0;
    bool bracket_ok = true;
};

EnergyReport make_energy_report(const PerturbationState& s, const PressureLaw& pl, const Vec3& w,
                                const OrderParams& orders, double delta_star, const Vec3& weights);

std::string energy_csv_header();
std::string energy_csv_row(const EnergyReport& r);

/// Residual of d/dt E_phys + int |grad h|^2 = 0 on uniformly sampled (t,E,D),
/// by centered differences (order 4 from five samples on, order 2 below),
/// normalized by the local dissipation floored at 1e-6 of its peak.
struct IdentitySeries {
    std::vector<double> t;
    std::vector<double> residual_rel;
    double max_rel = 0.0;
    int stencil_order = 0;
};
IdentitySeries energy_identity_residual(const std::vector<double>& t,
                                        const std::vector<double>& e_phys,
                                        const std::vector<double>& dissipation);

/// Centered-difference series dX/dt + margin * E and the largest margin for
/// which the series stays nonpositive throughout.
struct MonitorResult {
    std::vector<double> t;
    std::vector<double> series;
    bool nonpositive_throughout = true;
    int violations = 0;
    double max_margin = 0.0;
};
MonitorResult dissipation_monitor(const std::vector<double>& t, const std::vector<double>& X,
                                  const std::vector<double>& e_low, double margin);

/// Least squares fit of E(t) = C (1 + alpha t)^(-p) in log space; deterministic
/// endpoint-slope initialization; p is clamped to [0, 50].
struct DecayFit {
    double C = 0.0;
    double alpha = 0.0;
    double p = 0.0;
    double residual = 0.0; // rms log-space misfit
    bool degenerate = false;
    int iterations = 0;
};
DecayFit decay_fit(const std::vector<double>& t, const std::vector<double>& e);

/// E_N <= C E_{L-r}^{d/(N+d+r-L)} E_{N+d}^{(N+r-L)/(N+d+r-L)} with C = 1
/// mode-wise (ratio == 1 exactly on single-mode states).
struct InterpolationCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};
InterpolationCheck interpolation_check(const PerturbationState& s, const OrderParams& orders);

} // namespace mhdlab
