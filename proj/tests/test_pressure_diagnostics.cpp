#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mhdlab/checkpoint.hpp"
#include "mhdlab/config.hpp"
#include "mhdlab/diagnostics.hpp"
#include "mhdlab/random_fields.hpp"
#include "oracle_utils.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

using namespace mhdlab;

namespace {
PerturbationState small_random_state(const Grid3& g, int kmax, double amp, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    SpectralField a0 = random_band_limited(g, kmax, rng);
    VectorSpectralField u0 = random_band_limited_vector(g, kmax, rng);
    VectorSpectralField h0 = random_band_limited_vector(g, kmax, rng);
    scale_to_linf(a0, amp);
    scale_to_linf(u0, amp);
    scale_to_linf(h0, amp);
    return prepare_initial_data(a0, u0, h0);
}
} // namespace

TEST_CASE("gamma-law constants: p = rho^2") {
    const PressureLaw pl = make_gamma_law(2.0);
    CHECK(pl.beta == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(pl.alpha1 == doctest::Approx(0.5).epsilon(1e-12)); // min{2, 1/2}
    CHECK(pl.alpha2 == doctest::Approx(2.0).epsilon(1e-12)); // max{2, 3/2}
    for (double rho : {0.6, 0.9, 1.0, 1.2, 1.45})
        CHECK(pl.e(rho) == doctest::Approx(2.0 * (rho - 1.0) * (rho - 1.0)).epsilon(1e-12));
}

TEST_CASE("isothermal constants: p = rho") {
    const PressureLaw pl = make_gamma_law(1.0);
    CHECK(pl.beta == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pl.alpha1 == doctest::Approx(0.5).epsilon(1e-12)); // min{2/3, 1/2}
    CHECK(pl.alpha2 == doctest::Approx(2.0).epsilon(1e-12)); // max{2, 3/2}
    CHECK(pl.e(1.0) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("e(1) = 0 and positivity away from rho = 1 for the default gas") {
    const PressureLaw pl = make_gamma_law(1.4);
    CHECK(std::abs(pl.e(1.0)) < 1e-14);
    for (double rho : {0.55, 0.8, 1.2, 1.45}) CHECK(pl.e(rho) > 0.0);
    // Taylor bracket alpha1 (rho-1)^2 <= e <= alpha2 (rho-1)^2
    for (double rho : {0.6, 0.85, 1.15, 1.4}) {
        const double q = (rho - 1.0) * (rho - 1.0);
        CHECK(pl.e(rho) >= pl.alpha1 * q * (1.0 - 1e-12));
        CHECK(pl.e(rho) <= pl.alpha2 * q * (1.0 + 1e-12));
    }
}

TEST_CASE("generic pressure path: sampled constants and quadrature potential") {
    const PressureLaw pl =
        pressure_constants([](double s) { return s * s; }, nullptr, {0.5, 1.5}, 4);
    CHECK(pl.beta == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(pl.alpha1 == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(pl.alpha2 == doctest::Approx(2.0).epsilon(1e-8));
    for (double rho : {0.7, 1.3})
        CHECK(pl.e(rho) == doctest::Approx(2.0 * (rho - 1.0) * (rho - 1.0)).epsilon(1e-10));
    CHECK(pl.Q >= 2.25); // sup |p| alone reaches (3/2)^2

    CHECK_THROWS_AS(pressure_constants([](double s) { return -s; }, nullptr, {0.5, 1.5}, 2),
                    std::invalid_argument);
}

TEST_CASE("order params: relaxed preset and the strict asymptotic regime") {
    const OrderParams relaxed = relaxed_orders();
    relaxed.validate();
    CHECK_FALSE(relaxed.asymptotic_regime());
    const OrderParams strict{6, 10, 15, 24, 2.5};
    strict.validate();
    CHECK(strict.asymptotic_regime());
    CHECK_THROWS_AS((OrderParams{0, 2, 3, 7, 1.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((OrderParams{1, 1, 3, 7, 1.0}).validate(), std::invalid_argument);
}

TEST_CASE("sobolev energy: zero state, a single cosine, monotonicity") {
    const Grid3 g(16);
    PerturbationState s(g);
    CHECK(sobolev_energy(s, 3.0) == 0.0);
    s.a = oracle::cosine_field(g, 1, 0, 0);
    CHECK(sobolev_energy(s, 0.0) == doctest::Approx(0.5).epsilon(1e-13));
    const PerturbationState r = small_random_state(g, 2, 1e-2, 5);
    CHECK(sobolev_energy(r, 1.0) <= sobolev_energy(r, 2.0));
    CHECK(sobolev_energy(r, 2.0) <= sobolev_energy(r, 3.0));
}

TEST_CASE("weighted energy: zero state, closed-form potential, bracket on random states") {
    const Grid3 g(16);
    const PressureLaw pl = make_gamma_law(1.4);
    PerturbationState zero(g);
    CHECK(weighted_energy(zero, pl, 3) == doctest::Approx(0.0).epsilon(1e-14));

    // p = rho^2: p'(rho)/rho = 2 exactly and int e = 2||a||_0^2
    const PressureLaw quad = make_gamma_law(2.0);
    PerturbationState s(g);
    s.a = oracle::cosine_field(g, 1, 0, 0, 0.05);
    const double xt = weighted_energy(s, quad, 1);
    const double na = l2_norm(s.a);
    const double la = l2_norm(lambda_pow(s.a, 1.0));
    CHECK(xt == doctest::Approx(2.0 * na * na + 2.0 * la * la).epsilon(1e-12));

    const OrderParams orders = relaxed_orders();
    for (int i = 0; i < 100; ++i) {
        const PerturbationState rs = small_random_state(g, 2, 1e-2, 1000 + i);
        const double x = weighted_energy(rs, pl, orders.N);
        const double en = sobolev_energy(rs, orders.N);
        CHECK(x >= pl.alpha1 * en);
        CHECK(x <= pl.alpha2 * en);
    }

    // the high-order analogue (order N + d) obeys the same bracket
    const PerturbationState rs = small_random_state(g, 2, 1e-2, 4242);
    const double y = weighted_energy(rs, pl, orders.N + orders.d);
    const double end = sobolev_energy(rs, orders.N + orders.d);
    CHECK(y >= pl.alpha1 * end);
    CHECK(y <= pl.alpha2 * end);
}

TEST_CASE("cross functionals: zero state, closed-form single modes, annihilation") {
    const Grid3 g(16);
    const OrderParams orders = relaxed_orders();
    const Vec3 w = {1.0, 0.0, 0.0};
    PerturbationState zero(g);
    const auto c0 = cross_functionals(zero, w, orders);
    CHECK(c0[0] == 0.0);
    CHECK(c0[1] == 0.0);
    CHECK(c0[2] == 0.0);

    // u = grad phi with phi = cos(2 pi x1): div u = -4 pi^2 phi;
    // a = phi: cross1 = -4 pi^2 <phi, phi> at M - r - 1 = 0
    PerturbationState s(g);
    const SpectralField phi = oracle::cosine_field(g, 1, 0, 0, 0.01);
    s.u = gradient(phi);
    s.a = phi;
    const double two_pi = 6.283185307179586;
    const auto c1 = cross_functionals(s, w, orders);
    const double expected = -two_pi * two_pi * inner_l2(phi, phi);
    CHECK(c1[0] == doctest::Approx(expected).epsilon(1e-12));

    // w.k = 0 on all active modes and h perpendicular to u: cross2 vanishes
    PerturbationState v(g);
    v.u[0] = oracle::cosine_field(g, 0, 1, 0, 0.01);
    v.h[2] = oracle::sine_field(g, 0, 1, 0, 0.01);
    const auto c2 = cross_functionals(v, w, orders);
    CHECK(std::abs(c2[1]) < 1e-15);
}

TEST_CASE("composite X bracket behavior") {
    const Grid3 g(16);
    const PressureLaw pl = make_gamma_law(1.4);
    const OrderParams orders = relaxed_orders();
    const Vec3 w{2.0, 2.8284271247461903, 3.4641016151377544};

    PerturbationState zero(g);
    const CompositeX cz = composite_X(zero, pl, w, orders, 1e-3, {1.0, 1.0, 1.0});
    CHECK(cz.X == 0.0);
    CHECK(cz.bracket_ok);

    for (int i = 0; i < 20; ++i) {
        const PerturbationState rs = small_random_state(g, 2, 1e-2, 300 + i);
        const CompositeX cx = composite_X(rs, pl, w, orders, 1e-3, {1.0, 1.0, 1.0});
        CHECK(cx.bracket_ok);
        CHECK(cx.delta_used > 0.0);
        CHECK(cx.X >= 0.5 * pl.alpha1 * cx.e_n);
        CHECK(cx.X <= 2.0 * pl.alpha2 * cx.e_n);

        const CompositeX c0 = composite_X(rs, pl, w, orders, 0.0, {1.0, 1.0, 1.0});
        CHECK(c0.X == doctest::Approx(c0.X_tilde).epsilon(1e-14));
        CHECK(c0.X >= pl.alpha1 * c0.e_n);
        CHECK(c0.X <= pl.alpha2 * c0.e_n);
    }
}

TEST_CASE("energy identity residual: exact exponential samples and edge cases") {
    const double lambda = 4.0 * M_PI * M_PI;
    const double dt = 1e-4;
    std::vector<double> t, e, d;
    for (int i = 0; i < 64; ++i) {
        t.push_back(dt * i);
        e.push_back(std::exp(-2.0 * lambda * dt * i));
        d.push_back(2.0 * lambda * std::exp(-2.0 * lambda * dt * i));
    }
    const IdentitySeries ids = energy_identity_residual(t, e, d);
    CHECK(ids.stencil_order == 4);
    CHECK(ids.max_rel <= 1e-8);

    std::vector<double> z(16, 0.0), tz;
    for (int i = 0; i < 16; ++i) tz.push_back(0.1 * i);
    const IdentitySeries zero = energy_identity_residual(tz, z, z);
    CHECK(zero.max_rel == 0.0);

    std::vector<double> bad{0.0, 0.1, 0.25, 0.3};
    CHECK_THROWS_AS(
        energy_identity_residual(bad, std::vector<double>(4, 1.0), std::vector<double>(4, 1.0)),
        std::invalid_argument);
    CHECK_THROWS_AS(energy_identity_residual({0.0, 0.1}, {1.0, 1.0}, {1.0, 1.0}),
                    std::invalid_argument);
}

TEST_CASE("dissipation monitor: constant and decaying series") {
    std::vector<double> t, xconst, xdec, e;
    for (int i = 0; i < 50; ++i) {
        t.push_back(0.05 * i);
        xconst.push_back(0.0);
        xdec.push_back(std::exp(-t.back()));
        e.push_back(std::exp(-t.back()));
    }
    const MonitorResult mc = dissipation_monitor(t, xconst, xconst, 0.1);
    for (double s : mc.series) CHECK(s == 0.0);
    CHECK(mc.nonpositive_throughout);

    const MonitorResult md = dissipation_monitor(t, xdec, e, 0.5);
    CHECK(md.nonpositive_throughout);
    CHECK(md.violations == 0);
    // -dX/dt / E = 1 up to the centered-difference factor sinh(dt)/dt
    CHECK(md.max_margin == doctest::Approx(1.0).epsilon(1e-3));

    const MonitorResult bad = dissipation_monitor(t, e, e, 2.0);
    CHECK_FALSE(bad.nonpositive_throughout);
    CHECK(bad.violations > 0);
}

TEST_CASE("decay fit: synthetic recovery, degeneracy, model mismatch, rejection") {
    std::vector<double> t, e;
    for (int i = 0; i < 100; ++i) {
        t.push_back(20.0 * i / 99.0);
        e.push_back(2.0 * std::pow(1.0 + 0.5 * t.back(), -3.0));
    }
    const DecayFit fit = decay_fit(t, e);
    CHECK_FALSE(fit.degenerate);
    CHECK(fit.C == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(fit.alpha == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(fit.p == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(fit.residual <= 1e-8);

    std::vector<double> c(20, 7.0), tc;
    for (int i = 0; i < 20; ++i) tc.push_back(double(i));
    const DecayFit cf = decay_fit(tc, c);
    CHECK(cf.degenerate);
    CHECK(cf.C == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(cf.p == 0.0);

    std::vector<double> ex;
    for (double tt : t) ex.push_back(std::exp(-tt));
    const DecayFit ef = decay_fit(t, ex);
    CHECK(ef.residual > 1e-3); // mismatch is reported, not an error

    std::vector<double> neg = e;
    neg[5] = -1.0;
    CHECK_THROWS_AS(decay_fit(t, neg), std::invalid_argument);
    CHECK_THROWS_AS(decay_fit({0.0, 1.0}, {1.0, 0.5}), std::invalid_argument);
}

TEST_CASE("interpolation inequality: single modes are sharp, random states bounded") {
    const Grid3 g(16);
    const OrderParams orders = relaxed_orders();
    PerturbationState s(g);
    s.a = oracle::cosine_field(g, 2, 1, 0, 0.01);
    const InterpolationCheck single = interpolation_check(s, orders);
    CHECK(single.ratio == doctest::Approx(1.0).epsilon(1e-12));

    for (int i = 0; i < 20; ++i) {
        const PerturbationState rs = small_random_state(g, 3, 1e-2, 700 + i);
        const InterpolationCheck chk = interpolation_check(rs, orders);
        CHECK(chk.ratio <= 1.0 + 1e-12);
        CHECK(chk.ratio > 0.0);
    }
}

TEST_CASE("energy report row matches the documented CSV schema") {
    const std::string header = energy_csv_header();
    CHECK(header ==
          "t,E_phys,dissipation,E_0,E_1,E_3,E_N_cfg,X_tilde,cross1,cross2,cross3,X,"
          "mass_residual,momentum_residual_x,momentum_residual_y,momentum_residual_z,"
          "mean_h_residual_x,mean_h_residual_y,mean_h_residual_z,div_h_L2,rho_min,rho_max");
    const Grid3 g(16);
    const PerturbationState s = small_random_state(g, 1, 1e-2, 9);
    const EnergyReport r =
        make_energy_report(s, make_gamma_law(1.4), {2.0, 2.8284271247461903, 3.4641016151377544},
                           relaxed_orders(), 1e-3, {1.0, 1.0, 1.0});
    const std::string row = energy_csv_row(r);
    CHECK(std::count(row.begin(), row.end(), ',') ==
          std::count(header.begin(), header.end(), ','));
    CHECK(r.bracket_ok);
}

TEST_CASE("checkpoint roundtrip is bit exact and validates the header") {
    const Grid3 g(8);
    const PerturbationState s = small_random_state(g, 2, 1e-2, 77);
    const std::string path = "/tmp/mhdlab_test_checkpoint.mhdt";
    write_checkpoint(path, s);
    const PerturbationState back = read_checkpoint(path);
    CHECK(back.grid().n == 8);
    CHECK(back.time == s.time);
    bool identical = true;
    for (long i = 0; i < g.size(); ++i) {
        identical = identical && back.a.coeff[i] == s.a.coeff[i];
        for (int c = 0; c < 3; ++c)
            identical = identical && back.u[c].coeff[i] == s.u[c].coeff[i] &&
                        back.h[c].coeff[i] == s.h[c].coeff[i];
    }
    CHECK(identical);

    std::ofstream bad("/tmp/mhdlab_bad_checkpoint.mhdt", std::ios::binary);
    bad << "NOPE";
    bad.close();
    CHECK_THROWS_AS(read_checkpoint("/tmp/mhdlab_bad_checkpoint.mhdt"), std::runtime_error);
    std::remove(path.c_str());
    std::remove("/tmp/mhdlab_bad_checkpoint.mhdt");
}

TEST_CASE("config: defaults, typed parsing, overrides, unknown keys") {
    Config cfg = Config::defaults();
    CHECK(cfg.get_int("grid.n") == 32);
    CHECK_FALSE(cfg.get_double_or_auto("time.dt").has_value());
    CHECK(cfg.get_vec3("physics.w")[0] == doctest::Approx(2.0));
    cfg.apply_override("grid.n=16");
    CHECK(cfg.get_int("grid.n") == 16);
    CHECK_THROWS_AS(cfg.apply_override("nonsense.key=1"), ConfigError);
    CHECK_THROWS_AS(cfg.apply_override("grid.n=abc"), ConfigError);
    CHECK_THROWS_AS(cfg.apply_override("grid.n"), ConfigError);
    CHECK_THROWS_AS(cfg.set("physics.w", "1 2"), ConfigError);

    const std::string path = "/tmp/mhdlab_test_config.cfg";
    std::ofstream out(path);
    out << "# comment line\n";
    out << "grid.n = 8\n";
    out << "time.t_end = 0.5   # trailing comment\n";
    out.close();
    const Config file_cfg = Config::from_file(path);
    CHECK(file_cfg.get_int("grid.n") == 8);
    CHECK(file_cfg.get_double("time.t_end") == doctest::Approx(0.5));
    const RunSetup setup = make_run_setup(file_cfg);
    CHECK(setup.solver.grid.n == 8);
    CHECK(setup.orders.N == 3);
    std::remove(path.c_str());

    CHECK(Config::defaults().echo() == Config::defaults().echo());
}
