#include "mhdlab/solver.hpp"

#include "mhdlab/fft.hpp"

#include <cmath>

namespace mhdlab {

namespace {

constexpr double two_pi = 6.28318530717958647692528676655900577;

// physical-grid values of d_axis f (Nyquist planes annihilated)
std::vector<double> deriv_physical(const SpectralField& f, int axis) {
    const Grid3& g = f.grid;
    std::vector<cplx> tmp(g.size());
    const int n = g.n, ny = n / 2;
    long idx = 0;
    for (int i = 0; i < n; ++i) {
        const int k1 = g.wavenumber(i);
        for (int j = 0; j < n; ++j) {
            const int k2 = g.wavenumber(j);
            for (int l = 0; l < n; ++l, ++idx) {
                if (i == ny || j == ny || l == ny) {
                    tmp[idx] = cplx(0.0, 0.0);
                    continue;
                }
                const int k[3] = {k1, k2, g.wavenumber(l)};
                tmp[idx] = cplx(0.0, two_pi * k[axis]) * f.coeff[idx];
            }
        }
    }
    std::vector<double> out(g.size());
    Fft3::get(n).inverse(tmp.data(), out.data());
    return out;
}

void check_positivity(const std::vector<double>& a, const SolverConfig& cfg, double t) {
    double lo = 1.0 + a[0], hi = 1.0 + a[0];
    for (double x : a) {
        lo = std::min(lo, 1.0 + x);
        hi = std::max(hi, 1.0 + x);
    }
    if (lo <= cfg.positivity_window.first || hi >= cfg.positivity_window.second)
        throw PositivityError(lo, hi, t);
}

struct PhysicalState {
    std::vector<double> A;
    std::array<std::vector<double>, 3> U, H;
    std::array<std::array<std::vector<double>, 3>, 3> dU, dH; // [component][axis]
    std::array<std::vector<double>, 3> GA;
    std::vector<double> divu;
};

PhysicalState expand(const PerturbationState& s, const SolverConfig& cfg) {
    PhysicalState p;
    p.A = to_physical(s.a);
    check_positivity(p.A, cfg, s.time);
    for (int c = 0; c < 3; ++c) {
        p.U[c] = to_physical(s.u[c]);
        p.H[c] = to_physical(s.h[c]);
        p.GA[c] = deriv_physical(s.a, c);
        for (int ax = 0; ax < 3; ++ax) {
            p.dU[c][ax] = deriv_physical(s.u[c], ax);
            p.dH[c][ax] = deriv_physical(s.h[c], ax);
        }
    }
    const long m = s.grid().size();
    p.divu.resize(m);
    for (long i = 0; i < m; ++i)
        p.divu[i] = p.dU[0][0][i] + p.dU[1][1][i] + p.dU[2][2][i];
    return p;
}

Tendency rhs_impl(const PerturbationState& s, const SolverConfig& cfg, bool include_resistive) {
    const Grid3& g = s.grid();
    const long m = g.size();
    const PhysicalState p = expand(s, cfg);
    const Vec3& w = cfg.w;
    Tendency t(g);

    // mass: da = -div(rho u), divergence taken spectrally
    {
        VectorSpectralField mom(g);
        std::vector<double> buf(m);
        for (int c = 0; c < 3; ++c) {
            for (long i = 0; i < m; ++i) buf[i] = (1.0 + p.A[i]) * p.U[c][i];
            mom[c] = from_physical(g, buf);
        }
        t.da = -1.0 * divergence(mom);
        truncate_to_band(t.da);
    }

    // momentum: du = [-rho (u.grad)u - p'(rho) grad a + sum_j H_j (dH[i][j]-dH[j][i])] / rho
    {
        std::vector<double> dp(m);
        for (long i = 0; i < m; ++i) dp[i] = cfg.pressure.deriv(1.0 + p.A[i], 1);
        std::vector<double> buf(m);
        for (int c = 0; c < 3; ++c) {
            for (long i = 0; i < m; ++i) {
                const double rho = 1.0 + p.A[i];
                const double adv =
                    p.U[0][i] * p.dU[c][0][i] + p.U[1][i] * p.dU[c][1][i] + p.U[2][i] * p.dU[c][2][i];
                double lorentz = 0.0;
                for (int j = 0; j < 3; ++j)
                    lorentz += (w[j] + p.H[j][i]) * (p.dH[c][j][i] - p.dH[j][c][i]);
                buf[i] = (-rho * adv - dp[i] * p.GA[c][i] + lorentz) / rho;
            }
            t.du[c] = from_physical(g, buf);
        }
        truncate_to_band(t.du);
    }

    // induction: dh = P[-(u.grad)h + (H.grad)u - H div u (+ nu Lap h)]
    {
        std::vector<double> buf(m);
        for (int c = 0; c < 3; ++c) {
            for (long i = 0; i < m; ++i) {
                const double adv =
                    p.U[0][i] * p.dH[c][0][i] + p.U[1][i] * p.dH[c][1][i] + p.U[2][i] * p.dH[c][2][i];
                double stretch = 0.0;
                for (int j = 0; j < 3; ++j) stretch += (w[j] + p.H[j][i]) * p.dU[c][j][i];
                buf[i] = -adv + stretch - (w[c] + p.H[c][i]) * p.divu[i];
            }
            t.dh[c] = from_physical(g, buf);
        }
        truncate_to_band(t.dh);
        if (include_resistive) {
            const double nu = cfg.nu;
            VectorSpectralField lap = laplacian(s.h);
            for (int c = 0; c < 3; ++c)
                for (long i = 0; i < m; ++i) t.dh[c].coeff[i] += nu * lap[c].coeff[i];
        }
        t.dh = leray_project(t.dh);
    }
    return t;
}

void exp_factor_h(VectorSpectralField& h, double nu, double tau) {
    const Grid3& g = h.grid();
    std::vector<double> fac(g.size());
    long idx = 0;
    for (int i = 0; i < g.n; ++i) {
        const double k1 = g.wavenumber(i);
        for (int j = 0; j < g.n; ++j) {
            const double k2 = g.wavenumber(j);
            for (int l = 0; l < g.n; ++l, ++idx) {
                const double k3 = g.wavenumber(l);
                fac[idx] = std::exp(-nu * two_pi * two_pi * (k1 * k1 + k2 * k2 + k3 * k3) * tau);
            }
        }
    }
    for (int c = 0; c < 3; ++c)
        for (long i = 0; i < g.size(); ++i) h[c].coeff[i] *= fac[i];
}

PerturbationState phi(PerturbationState s, double nu, double tau) {
    exp_factor_h(s.h, nu, tau);
    return s;
}

Tendency phi(Tendency t, double nu, double tau) {
    exp_factor_h(t.dh, nu, tau);
    return t;
}

PerturbationState axpy(PerturbationState y, double c, const Tendency& t) {
    const long m = y.grid().size();
    for (long i = 0; i < m; ++i) y.a.coeff[i] += c * t.da.coeff[i];
    for (int comp = 0; comp < 3; ++comp)
        for (long i = 0; i < m; ++i) {
            y.u[comp].coeff[i] += c * t.du[comp].coeff[i];
            y.h[comp].coeff[i] += c * t.dh[comp].coeff[i];
        }
    return y;
}

} // namespace

Tendency rhs(const PerturbationState& s, const SolverConfig& cfg) {
    return rhs_impl(s, cfg, true);
}

Remainders remainders(const PerturbationState& s, const SolverConfig& cfg) {
    const Grid3& g = s.grid();
    const long m = g.size();
    const PhysicalState p = expand(s, cfg);
    Remainders rem(g);
    rem.u_t = rhs_impl(s, cfg, true).du;

    // R1 = -div(a u)
    {
        VectorSpectralField au(g);
        std::vector<double> buf(m);
        for (int c = 0; c < 3; ++c) {
            for (long i = 0; i < m; ++i) buf[i] = p.A[i] * p.U[c][i];
            au[c] = from_physical(g, buf);
        }
        rem.R1 = -1.0 * divergence(au);
        truncate_to_band(rem.R1);
    }

    // R2 = -a u_t - (p'(1+a)-p'(1)) grad a - rho (u.grad)u + (h.grad)h - grad(|h|^2/2)
    {
        const double beta = cfg.pressure.beta;
        std::array<std::vector<double>, 3> ut{to_physical(rem.u_t[0]), to_physical(rem.u_t[1]),
                                              to_physical(rem.u_t[2])};
        std::vector<double> dp(m);
        for (long i = 0; i < m; ++i) dp[i] = cfg.pressure.deriv(1.0 + p.A[i], 1);
        std::vector<double> buf(m);
        for (int c = 0; c < 3; ++c) {
            for (long i = 0; i < m; ++i) {
                const double rho = 1.0 + p.A[i];
                const double adv =
                    p.U[0][i] * p.dU[c][0][i] + p.U[1][i] * p.dU[c][1][i] + p.U[2][i] * p.dU[c][2][i];
                double hterm = 0.0;
                for (int j = 0; j < 3; ++j)
                    hterm += p.H[j][i] * (p.dH[c][j][i] - p.dH[j][c][i]);
                buf[i] = -p.A[i] * ut[c][i] - (dp[i] - beta) * p.GA[c][i] - rho * adv + hterm;
            }
            rem.R2[c] = from_physical(g, buf);
        }
        truncate_to_band(rem.R2);
    }

    // R3 = -(u.grad)h + (h.grad)u - h div u
    {
        std::vector<double> buf(m);
        for (int c = 0; c < 3; ++c) {
            for (long i = 0; i < m; ++i) {
                const double adv =
                    p.U[0][i] * p.dH[c][0][i] + p.U[1][i] * p.dH[c][1][i] + p.U[2][i] * p.dH[c][2][i];
                double stretch = 0.0;
                for (int j = 0; j < 3; ++j) stretch += p.H[j][i] * p.dU[c][j][i];
                buf[i] = -adv + stretch - p.H[c][i] * p.divu[i];
            }
            rem.R3[c] = from_physical(g, buf);
        }
        truncate_to_band(rem.R3);
    }
    return rem;
}

double cfl_dt(const PerturbationState& s, const SolverConfig& cfg) {
    const long m = s.grid().size();
    const std::vector<double> a = to_physical(s.a);
    std::array<std::vector<double>, 3> u{to_physical(s.u[0]), to_physical(s.u[1]),
                                         to_physical(s.u[2])};
    std::array<std::vector<double>, 3> h{to_physical(s.h[0]), to_physical(s.h[1]),
                                         to_physical(s.h[2])};
    double umax = 0.0, cmax = 0.0, hmax = 0.0;
    for (long i = 0; i < m; ++i) {
        umax = std::max(umax, std::sqrt(u[0][i] * u[0][i] + u[1][i] * u[1][i] + u[2][i] * u[2][i]));
        cmax = std::max(cmax, std::sqrt(std::max(cfg.pressure.deriv(1.0 + a[i], 1), 0.0)));
        const double h1 = cfg.w[0] + h[0][i], h2 = cfg.w[1] + h[1][i], h3 = cfg.w[2] + h[2][i];
        hmax = std::max(hmax, std::sqrt(h1 * h1 + h2 * h2 + h3 * h3));
    }
    const double dx = 1.0 / s.grid().n;
    const double speed = std::max(umax + cmax + hmax, 1e-12);
    return cfg.cfl_number * dx / speed;
}

PerturbationState step(const PerturbationState& y, double dt, const SolverConfig& cfg) {
    const double nu = cfg.nu;
    int stage = 1;
    try {
        const Tendency N1 = rhs_impl(y, cfg, false);
        stage = 2;
        PerturbationState u2 = phi(axpy(y, 0.5 * dt, N1), nu, 0.5 * dt);
        u2.time = y.time + 0.5 * dt;
        const Tendency N2 = rhs_impl(u2, cfg, false);
        stage = 3;
        PerturbationState u3 = axpy(phi(y, nu, 0.5 * dt), 0.5 * dt, N2);
        u3.time = y.time + 0.5 * dt;
        const Tendency N3 = rhs_impl(u3, cfg, false);
        stage = 4;
        PerturbationState u4 = axpy(phi(y, nu, dt), dt, phi(N3, nu, 0.5 * dt));
        u4.time = y.time + dt;
        const Tendency N4 = rhs_impl(u4, cfg, false);

        PerturbationState out = phi(y, nu, dt);
        out = axpy(std::move(out), dt / 6.0, phi(N1, nu, dt));
        out = axpy(std::move(out), dt / 3.0, phi(N2, nu, 0.5 * dt));
        out = axpy(std::move(out), dt / 3.0, phi(N3, nu, 0.5 * dt));
        out = axpy(std::move(out), dt / 6.0, N4);
        out.h = leray_project(out.h);
        truncate_to_band(out.a);
        truncate_to_band(out.u);
        truncate_to_band(out.h);
        out.time = y.time + dt;
        return out;
    } catch (const PositivityError& e) {
        throw PositivityError(e.rho_min, e.rho_max, e.time, stage);
    }
}

FineSample fine_sample(const PerturbationState& s, const SolverConfig& cfg) {
    FineSample f{};
    f.t = s.time;
    const long m = s.grid().size();
    const std::vector<double> a = to_physical(s.a);
    std::array<std::vector<double>, 3> u{to_physical(s.u[0]), to_physical(s.u[1]),
                                         to_physical(s.u[2])};
    double kin = 0.0, pot = 0.0;
    double rmin = 1.0 + a[0], rmax = 1.0 + a[0];
    Vec3 mom{0.0, 0.0, 0.0};
    for (long i = 0; i < m; ++i) {
        const double rho = 1.0 + a[i];
        const double usq = u[0][i] * u[0][i] + u[1][i] * u[1][i] + u[2][i] * u[2][i];
        kin += rho * usq;
        pot += cfg.pressure.e(rho);
        for (int c = 0; c < 3; ++c) mom[c] += rho * u[c][i];
        rmin = std::min(rmin, rho);
        rmax = std::max(rmax, rho);
    }
    kin /= double(m);
    pot /= double(m);
    double h_sq = 0.0, diss = 0.0;
    {
        const Grid3& g = s.grid();
        long idx = 0;
        for (int i = 0; i < g.n; ++i) {
            const double k1 = g.wavenumber(i);
            for (int j = 0; j < g.n; ++j) {
                const double k2 = g.wavenumber(j);
                for (int l = 0; l < g.n; ++l, ++idx) {
                    const double k3 = g.wavenumber(l);
                    const double ksq = k1 * k1 + k2 * k2 + k3 * k3;
                    const double e = std::norm(s.h[0].coeff[idx]) + std::norm(s.h[1].coeff[idx]) +
                                     std::norm(s.h[2].coeff[idx]);
                    h_sq += e;
                    diss += two_pi * two_pi * ksq * e;
                }
            }
        }
    }
    f.h_energy = 0.5 * h_sq;
    f.non_h_energy = 0.5 * (kin + pot);
    f.e_phys = f.h_energy + f.non_h_energy;
    f.dissipation = diss;
    f.mass_res = std::abs(mean_value(s.a));
    for (int c = 0; c < 3; ++c) {
        f.momentum_res[c] = mom[c] / double(m);
        f.mean_h_res[c] = mean_value(s.h[c]);
    }
    f.div_h_l2 = l2_norm(divergence(s.h));
    f.rho_min = rmin;
    f.rho_max = rmax;
    return f;
}

RunResult run(const SolverConfig& cfg, const PerturbationState& initial,
              const std::vector<SampleCallback>& callbacks) {
    RunResult res;
    if (!(cfg.t_end > 0.0)) throw std::invalid_argument("run: t_end must be positive");
    if (!(cfg.cfl_number > 0.0 && cfg.cfl_number < 1.0))
        throw std::invalid_argument("run: cfl_number must lie in (0,1)");
    const double dt0 = cfg.dt ? *cfg.dt : cfl_dt(initial, cfg);
    if (!(dt0 > 0.0)) throw std::invalid_argument("run: step size must be positive");
    const double cadence = cfg.output_cadence > 0.0 ? std::min(cfg.output_cadence, cfg.t_end)
                                                    : cfg.t_end;
    const long per_cadence = std::max(1L, static_cast<long>(std::ceil(cadence / dt0 - 1e-12)));
    const double dt = cadence / double(per_cadence);
    const long n_blocks = std::max(1L, static_cast<long>(std::ceil(cfg.t_end / cadence - 1e-12)));
    const long total = n_blocks * per_cadence;
    res.dt = dt;

    PerturbationState state = initial;
    res.fine.push_back(fine_sample(state, cfg));
    for (const auto& cb : callbacks) cb(state);

    for (long i = 1; i <= total; ++i) {
        if (!cfg.dt && cfl_dt(state, cfg) < dt) {
            res.status = RunStatus::cfl_failure;
            res.failure_reason = "CFL guard: stable step fell below the fixed run step";
            res.failure_time = state.time;
            return res;
        }
        try {
            state = step(state, dt, cfg);
        } catch (const PositivityError& e) {
            res.status = RunStatus::positivity_failure;
            res.failure_reason = std::string(e.what()) + " (RK stage " + std::to_string(e.stage) + ")";
            res.failure_time = e.time;
            return res;
        }
        state.time = double(i) * dt;
        res.steps = i;
        if (i % cfg.fine_stride == 0 || i == total) res.fine.push_back(fine_sample(state, cfg));
        if (i % per_cadence == 0 || i == total)
            for (const auto& cb : callbacks) cb(state);
    }
    res.status = RunStatus::completed;
    return res;
}

} // namespace mhdlab
