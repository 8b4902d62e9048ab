#pragma once

#include "mhdlab/pressure.hpp"
#include "mhdlab/state.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace mhdlab {

struct SolverConfig {
    Grid3 grid;
    std::optional<double> dt;   // empty = auto from CFL of the initial state
    double t_end = 10.0;
    double nu = 1.0;
    PressureLaw pressure;
    Vec3 w{0.0, 0.0, 0.0};      // background magnetic field (w = 0 allowed)
    double cfl_number = 0.4;
    std::pair<double, double> positivity_window{0.5, 1.5};
    double output_cadence = 0.05;
    int fine_stride = 1;        // per-step series sampled every this many steps

    explicit SolverConfig(const Grid3& g) : grid(g), pressure(make_gamma_law(1.4)) {}
};

struct Tendency {
    SpectralField da;
    VectorSpectralField du;
    VectorSpectralField dh;
    explicit Tendency(const Grid3& g) : da(g), du(g), dh(g) {}
};

/// Full right-hand side of the perturbation system, dealiased, with the
/// division by rho done pointwise on the physical grid:
///   da = -div(rho u)
///   du = [-rho (u.grad)u - p'(rho) grad a + (H.grad)h - (grad h)^T H] / rho,  H = w + h
///   dh = P[-(u.grad)h + (H.grad)u - H div u + nu Lap h],  P = Leray projection
/// Throws PositivityError when rho leaves the window.
Tendency rhs(const PerturbationState& s, const SolverConfig& cfg);

/// Remainder split of the system around its linearization:
///   da = -div u            + R1
///   du = -beta grad a + (w.grad)h - grad(w.h) + R2
///   dh = P[Lap h + (w.grad)u - w div u + R3]
struct Remainders {
    SpectralField R1;
    VectorSpectralField R2;
    VectorSpectralField R3;
    VectorSpectralField u_t; // full momentum-equation tendency
    explicit Remainders(const Grid3& g) : R1(g), R2(g), R3(g), u_t(g) {}
};
Remainders remainders(const PerturbationState& s, const SolverConfig& cfg);

/// Advective CFL bound: cfl * dx / (max|u| + max sqrt(p'(rho)) + max|w+h|).
double cfl_dt(const PerturbationState& s, const SolverConfig& cfg);

/// One step of the integrating-factor (Lawson) RK4: the resistive term
/// nu Lap h is integrated exactly by e^{-nu 4pi^2 |k|^2 dt}, everything else
/// explicit. h is re-projected and the state re-truncated after the step.
PerturbationState step(const PerturbationState& s, double dt, const SolverConfig& cfg);

enum class RunStatus { completed, positivity_failure, cfl_failure };

struct FineSample {
    double t;
    double e_phys;       // (1/2) int (rho|u|^2 + |h|^2 + e(rho))
    double dissipation;  // int |grad h|^2
    double h_energy;     // (1/2) int |h|^2
    double non_h_energy; // (1/2) int (rho|u|^2 + e(rho))
    double mass_res;
    Vec3 momentum_res;
    Vec3 mean_h_res;
    double div_h_l2;
    double rho_min;
    double rho_max;
};

struct RunResult {
    RunStatus status = RunStatus::completed;
    std::string failure_reason;
    double failure_time = 0.0;
    long steps = 0;
    double dt = 0.0; // the uniform step actually used
    std::vector<FineSample> fine;
};

using SampleCallback = std::function<void(const PerturbationState&)>;

/// Integrates from `initial` to t_end with a uniform step (the requested or
/// CFL-derived dt, snapped down so the output cadence is an exact multiple).
/// Callbacks fire on the initial state, every cadence boundary, and the final
/// state. Instability is returned as data: a partial trajectory plus reason.
RunResult run(const SolverConfig& cfg, const PerturbationState& initial,
              const std::vector<SampleCallback>& callbacks = {});

FineSample fine_sample(const PerturbationState& s, const SolverConfig& cfg);

} // namespace mhdlab
