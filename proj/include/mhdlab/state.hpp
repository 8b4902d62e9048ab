#pragma once

#include "mhdlab/spectral_field.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mhdlab {

/// Perturbation triple around the constant state (1, 0, w):
/// a = rho - 1, velocity u, magnetic perturbation h = H - w.
struct PerturbationState {
    SpectralField a;
    VectorSpectralField u;
    VectorSpectralField h;
    double time = 0.0;

    explicit PerturbationState(const Grid3& g) : a(g), u(g), h(g) {}
    const Grid3& grid() const { return a.grid; }
};

struct ConstraintResiduals {
    double mass;     // |integral rho - 1|
    Vec3 momentum;   // integral rho u
    Vec3 mean_h;     // integral h
    double div_h_l2; // ||div h||_0
};
ConstraintResiduals constraint_residuals(const PerturbationState& s);

struct RhoExtrema {
    double min;
    double max;
};
RhoExtrema rho_extrema(const PerturbationState& s);

struct PositivityError : std::runtime_error {
    double rho_min;
    double rho_max;
    double time;
    int stage; // RK stage where the violation surfaced, -1 outside stepping

    PositivityError(double lo, double hi, double t, int st = -1)
        : std::runtime_error("density outside positivity window: rho in [" + std::to_string(lo) +
                             ", " + std::to_string(hi) + "] at t = " + std::to_string(t)),
          rho_min(lo), rho_max(hi), time(t), stage(st) {}
};

/// Enforces the mean constraints on raw fields: a centered so integral rho = 1,
/// h centered and Leray-projected, u shifted by the constant vector that kills
/// the momentum mean. All fields are truncated to the dealias band first
/// (solver states live there). Throws PositivityError if 1 + a leaves the window.
PerturbationState prepare_initial_data(const SpectralField& a0, const VectorSpectralField& u0,
                                       const VectorSpectralField& h0,
                                       std::pair<double, double> window = {0.5, 1.5});

/// Initial data recipes for the CLI and tests.
struct InitSpec {
    enum class Kind { zero, random, single_h_mode };
    Kind kind = Kind::random;
    double amplitude = 1e-2;
    int kmax = 1;               // random band limit
    std::uint64_t seed = 20260808;
    std::array<int, 3> mode{1, 0, 0}; // single_h_mode wave vector
    int component = 2;                // h component for single_h_mode (must be perp to mode)
};
PerturbationState make_initial_state(const Grid3& g, const InitSpec& init,
                                     std::pair<double, double> window = {0.5, 1.5});

} // namespace mhdlab
