// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.

#include "mhdlab/diagnostics.hpp"
#include "mhdlab/diophantine.hpp"
#include "mhdlab/linear_analysis.hpp"
#include "mhdlab/random_fields.hpp"
#include "mhdlab/scenarios.hpp"
#include "mhdlab/solver.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace mhdlab;

namespace {

constexpr double two_pi = 6.28318530717958647692528676655900577;

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

PerturbationState random_state(const Grid3& g, int kmax, double amp, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    SpectralField a0 = random_band_limited(g, kmax, rng);
    VectorSpectralField u0 = random_band_limited_vector(g, kmax, rng);
    VectorSpectralField h0 = random_band_limited_vector(g, kmax, rng);
    scale_to_linf(a0, amp);
    scale_to_linf(u0, amp);
    scale_to_linf(h0, amp);
    return prepare_initial_data(a0, u0, h0);
}

double state_dist(const PerturbationState& x, const PerturbationState& y) {
    const double a = l2_norm(x.a - y.a);
    const double u = l2_norm(x.u - y.u);
    const double h = l2_norm(x.h - y.h);
    return std::sqrt(a * a + u * u + h * h);
}

// ---- criterion 1 -----------------------------------------------------------
void criterion1() {
    bool ok = true;
    std::ostringstream note;
    for (int n : {16, 32}) {
        const Grid3 g(n);
        std::mt19937_64 rng(1000 + n);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::vector<double> samples(g.size());
        for (double& x : samples) x = gauss(rng);
        const SpectralField f = from_physical(g, samples);
        const std::vector<double> back = to_physical(f);
        double round = 0.0, ms = 0.0;
        for (long i = 0; i < g.size(); ++i) {
            round = std::max(round, std::abs(back[i] - samples[i]));
            ms += samples[i] * samples[i];
        }
        ms /= double(g.size());
        const double spec = l2_norm(f);
        const double parseval = std::abs(ms - spec * spec) / ms;
        ok = ok && round <= 1e-12 && parseval <= 1e-10;
        if (n == 32) note << "roundtrip " << round << ", parseval " << parseval;
    }
    {
        const Grid3 g(16);
        std::mt19937_64 rng(7);
        const SpectralField f = random_band_limited(g, 5, rng);
        const SpectralField a = lambda_pow(lambda_pow(f, 1.1), 0.9);
        const SpectralField b = lambda_pow(f, 2.0);
        double comp = 0.0;
        for (long i = 0; i < g.size(); ++i) comp = std::max(comp, std::abs(a.coeff[i] - b.coeff[i]));
        const double scale = std::max(1.0, l2_norm(b));
        ok = ok && comp <= 1e-12 * scale;
        note << ", lambda composition " << comp / scale;
    }
    report(1, "spectral exactness", ok, note.str());
}

// ---- criterion 2 -----------------------------------------------------------
void criterion2() {
    const MarginEntry e1 = dot_margin({1.0, 0.0, 0.0}, 3.0, 20);
    const MarginEntry e2 = dot_margin({1.0, 2.0, 3.0}, 3.0, 20);
    const MarginEntry e3 = dot_margin(default_diophantine_w(), 3.0, 20);
    bool ok = e1.margin == 0.0 && e1.argmin == std::array<int, 3>{0, 1, 0};
    ok = ok && e2.margin == 0.0 && e2.argmin == std::array<int, 3>{1, 1, -1};
    ok = ok && e3.margin > 0.0;
    long violations = 0;
    for (const Vec3& w : {default_diophantine_w(), Vec3{1.0, 0.0, 0.0}, Vec3{1.0, 2.0, 3.0}})
        violations += long(tilde_inequality_check(w, 20).violations.size());
    ok = ok && violations == 0;
    std::ostringstream note;
    note << "margin((1,s2,s3),K=20) = " << e3.margin << ", tilde violations " << violations;
    report(2, "Diophantine certification", ok, note.str());
}

// ---- criterion 3 -----------------------------------------------------------
void criterion3() {
    bool ok = true;
    std::ostringstream note;
    // single-mode case w = e1, k = e1, r = s = 3: ratio (2 pi)^-4 to 1e-12
    {
        const Grid3 g(16);
        SpectralField f(g);
        f.at(1, 0, 0) = cplx(0.4, 0.1);
        f.at(-1, 0, 0) = cplx(0.4, -0.1);
        const double lhs = l2_norm(lambda_pow(f, 0.0));
        const double rhs = l2_norm(w_dot_grad(lambda_pow(f, 3.0), {1.0, 0.0, 0.0}));
        const double ratio = lhs / rhs;
        const double expected = std::pow(two_pi, -4.0);
        ok = ok && std::abs(ratio - expected) <= 1e-12 * expected;
        note << "single-mode ratio " << ratio;
    }
    // 100 random band-limited mean-zero fields at the sharp band constants
    {
        std::mt19937_64 rng(33);
        const CertificationResult cert =
            certify_constants(Grid3(36), default_diophantine_w(), 3.0, 3.0, 16, 100, rng);
        ok = ok && cert.constants.finite;
        const double tol = 1e-12;
        ok = ok && cert.max_ratio1 <= cert.constants.k1 * (1.0 + tol);
        ok = ok && cert.max_ratio2 <= cert.constants.k2 * (1.0 + tol);
        ok = ok && cert.max_ratio3 <= cert.constants.k3 * (1.0 + tol);
        ok = ok && std::abs(cert.max_ratio1 - cert.constants.k1) <= tol * cert.constants.k1;
        ok = ok && std::abs(cert.max_ratio2 - cert.constants.k2) <= tol * cert.constants.k2;
        ok = ok && std::abs(cert.max_ratio3 - cert.constants.k3) <= tol * cert.constants.k3;
        note << ", K1_emp " << cert.constants.k1 << " attained over " << cert.samples
             << " fields";
    }
    report(3, "band-sharp Poincare inequalities", ok, note.str());
}

// ---- criterion 4 -----------------------------------------------------------
void criterion4() {
    bool ok = true;
    std::ostringstream note;
    const double kappa_sq = two_pi * two_pi;
    {
        const SpectrumReport rep = mode_spectrum(ModeSystem({1, 0, 0}, {0.0, 0.0, 0.0}, 1.0, 1.0));
        ok = ok && rep.max_residual <= 1e-10;
        const cplx expected[6] = {{-kappa_sq, 0.0}, {-kappa_sq, 0.0}, {0.0, 0.0},
                                  {0.0, 0.0},       {0.0, -two_pi},  {0.0, two_pi}};
        for (const cplx& e : expected) {
            double best = 1e30;
            for (const auto& p : rep.pairs) best = std::min(best, std::abs(p.lambda - e));
            ok = ok && best <= 1e-10;
        }
    }
    {
        const SpectrumReport rep = mode_spectrum(ModeSystem({0, 1, 0}, {1.0, 0.0, 0.0}, 1.0, 1.0));
        ok = ok && rep.max_residual <= 1e-10;
        // oracle roots of lambda^3 + k^2 lambda^2 + 2 k^2 lambda + k^4, kappa = 2 pi
        Eigen::Matrix3cd comp = Eigen::Matrix3cd::Zero();
        comp(0, 2) = -kappa_sq * kappa_sq;
        comp(1, 0) = 1.0;
        comp(1, 2) = -2.0 * kappa_sq;
        comp(2, 1) = 1.0;
        comp(2, 2) = -kappa_sq;
        Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(comp, false);
        for (int i = 0; i < 3; ++i) {
            double best = 1e30;
            for (const auto& p : rep.pairs) best = std::min(best, std::abs(p.lambda - es.eigenvalues()(i)));
            ok = ok && best <= 1e-10;
        }
        // exact neutral u-direction
        bool neutral_u = false;
        for (int idx : rep.neutral) {
            const Vec6& v = rep.pairs[idx].v;
            if (std::abs(v[0]) < 1e-8 && std::abs(v[4]) + std::abs(v[5]) < 1e-8) neutral_u = true;
        }
        ok = ok && neutral_u;
    }
    {
        const BandScanReport scan = band_spectrum_scan(default_diophantine_w(), 1.0, 1.0, 8);
        ok = ok && scan.abscissa < 0.0;
        note << "abscissa over |k| <= 8: " << scan.abscissa << " at k = (" << scan.argmax[0]
             << "," << scan.argmax[1] << "," << scan.argmax[2] << ")";
    }
    report(4, "linear spectrum", ok, note.str());
}

// ---- criterion 5 -----------------------------------------------------------
void criterion5() {
    bool ok = true;
    std::ostringstream note;
    const Grid3 g(16);
    SolverConfig cfg(g);
    cfg.w = {2.0, 2.0 * std::sqrt(2.0), 2.0 * std::sqrt(3.0)};

    // constant state exactly stationary
    {
        const PerturbationState zero(g);
        const Tendency t = rhs(zero, cfg);
        const PerturbationState z1 = step(zero, 0.01, cfg);
        const double moved = l2_norm(z1.a) + l2_norm(z1.u) + l2_norm(z1.h) + l2_norm(t.da) +
                             l2_norm(t.du) + l2_norm(t.dh);
        ok = ok && moved == 0.0;
    }
    // resistive decay of a single h mode
    {
        SolverConfig hw(g);
        hw.w = {0.0, 0.0, 0.0};
        InitSpec init;
        init.kind = InitSpec::Kind::single_h_mode;
        init.amplitude = 1e-4;
        PerturbationState s = make_initial_state(g, init);
        for (int i = 0; i < 100; ++i) s = step(s, 1e-3, hw);
        const double amp = 2.0 * std::abs(s.h[2].at(1, 0, 0));
        const double expected = 1e-4 * std::exp(-4.0 * M_PI * M_PI * 0.1);
        const double rel = std::abs(amp - expected) / expected;
        ok = ok && rel <= 1e-6;
        note << "heat-decay rel err " << rel;
    }
    // Richardson order
    {
        const PerturbationState s0 = random_state(g, 2, 0.05, 51);
        const double t_end = 0.04;
        auto integrate = [&](double dt) {
            PerturbationState s = s0;
            const long n = std::lround(t_end / dt);
            for (long i = 0; i < n; ++i) s = step(s, dt, cfg);
            return s;
        };
        const PerturbationState ref = integrate(t_end / 128.0);
        const double e1 = state_dist(integrate(t_end / 16.0), ref);
        const double e2 = state_dist(integrate(t_end / 32.0), ref);
        const double ratio = e1 / e2;
        ok = ok && ratio >= 12.0 && ratio <= 20.0;
        note << ", Richardson ratio " << ratio;
    }
    // linearization consistency under eps -> eps/2
    {
        const double t_end = 0.02, dt = 2e-3;
        auto disc = [&](double eps) {
            PerturbationState s = random_state(g, 1, eps, 61);
            const PerturbationState lin = evolve_linear(s, cfg.w, cfg.pressure.beta, cfg.nu, t_end);
            for (int i = 0; i < 10; ++i) s = step(s, dt, cfg);
            return state_dist(s, lin);
        };
        const double ratio = disc(2e-3) / disc(1e-3);
        ok = ok && ratio >= 3.0 && ratio <= 5.0;
        note << ", linearization ratio " << ratio;
    }
    report(5, "solver correctness", ok, note.str());
}

// shared criterion-6 run
struct BigRun {
    RunResult run;
    std::vector<EnergyReport> reports;
    SolverConfig cfg;
    PressureLaw pressure;
    OrderParams orders;
    Vec3 w;

    BigRun() : cfg(Grid3(32)), pressure(make_gamma_law(1.4)), orders(relaxed_orders()) {}
};

BigRun run_criterion6(double t_end) {
    BigRun big;
    big.w = {2.0, 2.0 * std::sqrt(2.0), 2.0 * std::sqrt(3.0)};
    big.cfg.w = big.w;
    big.cfg.t_end = t_end;
    big.cfg.output_cadence = 0.05;
    InitSpec init;
    init.kind = InitSpec::Kind::random;
    init.amplitude = 1e-2;
    init.kmax = 1;
    init.seed = 20260808;
    const PerturbationState s0 = make_initial_state(big.cfg.grid, init);
    std::vector<SampleCallback> cbs;
    cbs.push_back([&big](const PerturbationState& s) {
        big.reports.push_back(make_energy_report(s, big.pressure, big.w, big.orders, 1e-3,
                                                 {1.0, 1.0, 1.0}));
    });
    big.run = run(big.cfg, s0, cbs);
    return big;
}

void criterion6(const BigRun& big) {
    bool ok = big.run.status == RunStatus::completed;
    double mass = 0.0, mom = 0.0, mh = 0.0, divh = 0.0;
    for (const FineSample& f : big.run.fine) {
        mass = std::max(mass, f.mass_res);
        for (int c = 0; c < 3; ++c) {
            mom = std::max(mom, std::abs(f.momentum_res[c]));
            mh = std::max(mh, std::abs(f.mean_h_res[c]));
        }
        divh = std::max(divh, f.div_h_l2);
    }
    ok = ok && mass <= 1e-8 && mom <= 1e-8 && mh <= 1e-8 && divh <= 1e-10;

    std::vector<double> t, e, d;
    for (const FineSample& f : big.run.fine) {
        t.push_back(f.t);
        e.push_back(f.e_phys);
        d.push_back(f.dissipation);
    }
    const IdentitySeries ids = energy_identity_residual(t, e, d);
    ok = ok && ids.max_rel <= 1e-4;
    std::ostringstream note;
    note << "drift max (mass " << mass << ", momentum " << mom << ", mean-h " << mh << "), div h "
         << divh << ", identity residual " << ids.max_rel;
    report(6, "conservation and energy identity", ok, note.str());
}

void criterion7(const BigRun& big) {
    bool ok = big.run.status == RunStatus::completed;
    std::ostringstream note;
    // monotone nonincreasing physical energy
    const double slack = 1e-12 * big.run.fine.front().e_phys;
    for (std::size_t i = 1; i < big.run.fine.size(); ++i)
        ok = ok && big.run.fine[i].e_phys <= big.run.fine[i - 1].e_phys + slack;
    // h energy decays by >= 90%
    const double h0 = big.run.fine.front().h_energy;
    const double h1 = big.run.fine.back().h_energy;
    ok = ok && h1 <= 0.1 * h0;
    note << "h-energy decay " << (h0 > 0 ? 1.0 - h1 / h0 : 0.0);
    // fitted decay exponent p > 0
    {
        std::vector<double> t, e;
        for (const FineSample& f : big.run.fine)
            if (f.e_phys > 0.0) {
                t.push_back(f.t);
                e.push_back(f.e_phys);
            }
        const DecayFit fit = decay_fit(t, e);
        ok = ok && !fit.degenerate && fit.p > 0.0;
        note << ", fitted p " << fit.p;
    }
    // paired w = 0 run: no comparable decay of the non-h energies, or an earlier guard failure
    {
        SolverConfig euler(big.cfg.grid);
        euler.w = {0.0, 0.0, 0.0};
        euler.t_end = big.cfg.t_end;
        euler.output_cadence = big.cfg.output_cadence;
        InitSpec init;
        init.kind = InitSpec::Kind::random;
        init.amplitude = 1e-2;
        init.kmax = 1;
        init.seed = 20260808;
        const PerturbationState s0 = make_initial_state(euler.grid, init);
        const RunResult er = run(euler, s0);
        bool euler_ok;
        if (er.status != RunStatus::completed) {
            euler_ok = true;
            note << ", euler leg failed a guard at t = " << er.failure_time;
        } else {
            const double n0 = er.fine.front().non_h_energy;
            const double n1 = er.fine.back().non_h_energy;
            const double frac = n0 > 0.0 ? 1.0 - n1 / n0 : 0.0;
            euler_ok = frac < 0.05;
            note << ", euler non-h decay " << frac;
        }
        ok = ok && euler_ok;
    }
    report(7, "stabilization property", ok, note.str());
}

void criterion8(const BigRun& big) {
    bool ok = big.run.status == RunStatus::completed;
    // brackets at every sampled state
    double delta_global = std::numeric_limits<double>::infinity();
    for (const EnergyReport& r : big.reports) {
        ok = ok && r.bracket_ok;
        if (r.eN > 0.0) {
            ok = ok && big.pressure.alpha1 * r.eN <= r.x_tilde &&
                 r.x_tilde <= big.pressure.alpha2 * r.eN;
        }
        delta_global = std::min(delta_global, r.delta_used);
    }
    // consistent-delta X series for the monitor
    std::vector<double> t, X, e0;
    for (const EnergyReport& r : big.reports) {
        t.push_back(r.t);
        X.push_back(r.x_tilde + delta_global * (r.cross[0] + r.cross[1] + r.cross[2]));
        e0.push_back(r.e0);
    }
    const MonitorResult mon = dissipation_monitor(t, X, e0, 0.0);
    std::ostringstream note;
    note << "delta_* " << delta_global << ", empirical margin " << mon.max_margin;
    ok = ok && mon.max_margin > 0.0;
    const MonitorResult at_margin = dissipation_monitor(t, X, e0, 0.999 * mon.max_margin);
    ok = ok && at_margin.nonpositive_throughout;
    note << ", nonpositive throughout at 0.999 margin: "
         << (at_margin.nonpositive_throughout ? "yes" : "no");
    report(8, "energy-functional structure", ok, note.str());
}

// ---- criterion 9 -----------------------------------------------------------
void criterion9() {
    const Grid3 g(16);
    SolverConfig cfg(g);
    cfg.w = {2.0, 2.0 * std::sqrt(2.0), 2.0 * std::sqrt(3.0)};
    const double l = 1.0, m = 2.0;
    bool ok = true;
    double worst_lo = 1.0, worst_hi = 0.0, bound1 = 0.0, bound3 = 0.0;
    for (int sweep = 0; sweep < 20; ++sweep) {
        auto stats = [&](double eps) {
            const PerturbationState s = random_state(g, 2, eps, 500 + sweep);
            const Remainders rem = remainders(s, cfg);
            const double au1 = std::sqrt(std::pow(sobolev_norm(s.a, l + 1.0), 2) +
                                         std::pow(sobolev_norm(s.u, l + 1.0), 2));
            const double uh1 = std::sqrt(std::pow(sobolev_norm(s.u, l + 1.0), 2) +
                                         std::pow(sobolev_norm(s.h, l + 1.0), 2));
            const double all1 = std::sqrt(std::pow(sobolev_norm(s.a, m + 1.0), 2) +
                                          std::pow(sobolev_norm(s.u, m + 1.0), 2) +
                                          std::pow(sobolev_norm(s.h, m + 1.0), 2));
            const double au2 = std::sqrt(std::pow(sobolev_norm(s.a, 2.0), 2) +
                                         std::pow(sobolev_norm(s.u, 2.0), 2));
            const double uh3 = std::sqrt(std::pow(sobolev_norm(s.u, 3.0), 2) +
                                         std::pow(sobolev_norm(s.h, 3.0), 2));
            struct Out {
                double s1, s2, s3, full1, full3;
            } out{};
            out.s1 = sobolev_norm(rem.R1, l) / au1;
            out.s2 = sobolev_norm(rem.R2, m) / all1;
            out.s3 = sobolev_norm(rem.R3, l) / uh1;
            out.full1 = sobolev_norm(rem.R1, l) / (au2 * au1);
            out.full3 = sobolev_norm(rem.R3, l) / (uh3 * uh1);
            return out;
        };
        const auto hi = stats(1e-2);
        const auto lo = stats(5e-3);
        for (double r : {lo.s1 / hi.s1, lo.s2 / hi.s2, lo.s3 / hi.s3}) {
            ok = ok && r >= 0.4 && r <= 0.6;
            worst_lo = std::min(worst_lo, r);
            worst_hi = std::max(worst_hi, r);
        }
        bound1 = std::max(bound1, hi.full1);
        bound3 = std::max(bound3, hi.full3);
    }
    ok = ok && std::isfinite(bound1) && std::isfinite(bound3) && bound1 < 100.0 && bound3 < 100.0;
    std::ostringstream note;
    note << "halving ratios in [" << worst_lo << ", " << worst_hi << "], bound shapes R1 "
         << bound1 << ", R3 " << bound3;
    report(9, "remainder quadraticity", ok, note.str());
}

// ---- criterion 10 ----------------------------------------------------------
void criterion10() {
    bool ok = true;
    std::ostringstream note;
    {
        std::vector<double> t, e;
        for (int i = 0; i < 100; ++i) {
            t.push_back(20.0 * i / 99.0);
            e.push_back(2.0 * std::pow(1.0 + 0.5 * t.back(), -3.0));
        }
        const DecayFit fit = decay_fit(t, e);
        ok = ok && std::abs(fit.C - 2.0) <= 1e-6 && std::abs(fit.alpha - 0.5) <= 1e-6 &&
             std::abs(fit.p - 3.0) <= 1e-6;
        note << "fit (C, alpha, p) = (" << fit.C << ", " << fit.alpha << ", " << fit.p << ")";
    }
    {
        namespace fs = std::filesystem;
        const fs::path base = fs::temp_directory_path() / "mhdlab_acceptance_rerun";
        fs::remove_all(base);
        Config cfg = Config::defaults();
        cfg.apply_override("grid.n=8");
        cfg.apply_override("time.t_end=0.2");
        cfg.apply_override("output.cadence=0.05");
        cfg.apply_override("init.amplitude=0.001");
        const int c1 = scenarios::simulate(cfg, (base / "a").string());
        const int c2 = scenarios::simulate(cfg, (base / "b").string());
        auto slurp = [](const fs::path& p) {
            std::ifstream in(p, std::ios::binary);
            std::ostringstream ss;
            ss << in.rdbuf();
            return ss.str();
        };
        const bool same = slurp(base / "a" / "series.csv") == slurp(base / "b" / "series.csv") &&
                          slurp(base / "a" / "fine.csv") == slurp(base / "b" / "fine.csv");
        ok = ok && c1 == 0 && c2 == 0 && same;
        note << ", rerun byte-identical: " << (same ? "yes" : "no");
        fs::remove_all(base);
    }
    report(10, "decay-fit oracle and determinism", ok, note.str());
}

} // namespace

int main(int argc, char** argv) {
    // a shortened run (for smoke use): acceptance --quick
    double t_end = 10.0;
    if (argc > 1 && std::string(argv[1]) == "--quick") t_end = 1.0;

    const auto t0 = std::chrono::steady_clock::now();
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();

    std::printf("... running the t_end = %g, n = 32 trajectory for criteria 6-8\n", t_end);
    std::fflush(stdout);
    const BigRun big = run_criterion6(t_end);
    criterion6(big);
    criterion7(big);
    criterion8(big);

    criterion9();
    criterion10();

    const auto dt = std::chrono::duration_cast<std::chrono::seconds>(
        std::chrono::steady_clock::now() - t0);
    std::printf("%s — %d of 10 criteria passed (%ld s)\n", failures == 0 ? "ACCEPTED" : "REJECTED",
                10 - failures, long(dt.count()));
    return failures == 0 ? 0 : 1;
}
