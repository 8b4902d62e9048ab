#include "mhdlab/scenarios.hpp"

#include "mhdlab/checkpoint.hpp"
#include "mhdlab/diophantine.hpp"
#include "mhdlab/format.hpp"
#include "mhdlab/linear_analysis.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace mhdlab::scenarios {

namespace {

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("short write to " + path);
}

std::string fmt(double x) { return format_double(x); }

std::string fine_csv(const RunResult& run) {
    std::string out =
        "t,E_phys,dissipation,h_energy,non_h_energy,mass_residual,"
        "momentum_residual_x,momentum_residual_y,momentum_residual_z,"
        "mean_h_residual_x,mean_h_residual_y,mean_h_residual_z,div_h_L2,rho_min,rho_max\n";
    for (const FineSample& s : run.fine) {
        const double cols[] = {s.t,
                               s.e_phys,
                               s.dissipation,
                               s.h_energy,
                               s.non_h_energy,
                               s.mass_res,
                               s.momentum_res[0],
                               s.momentum_res[1],
                               s.momentum_res[2],
                               s.mean_h_res[0],
                               s.mean_h_res[1],
                               s.mean_h_res[2],
                               s.div_h_l2,
                               s.rho_min,
                               s.rho_max};
        for (std::size_t i = 0; i < sizeof(cols) / sizeof(cols[0]); ++i) {
            if (i) out += ',';
            out += fmt(cols[i]);
        }
        out += '\n';
    }
    return out;
}

std::string status_text(const RunResult& run) {
    switch (run.status) {
        case RunStatus::completed: return "completed";
        case RunStatus::positivity_failure: return "positivity_failure";
        case RunStatus::cfl_failure: return "cfl_failure";
    }
    return "unknown";
}

struct RunArtifacts {
    RunResult run;
    std::vector<EnergyReport> reports;
};

RunArtifacts run_with_reports(const RunSetup& setup, const std::string& out_dir) {
    RunArtifacts art;
    PerturbationState initial{setup.solver.grid};
    try {
        initial = make_initial_state(setup.solver.grid, setup.init,
                                     setup.solver.positivity_window);
    } catch (const PositivityError& e) {
        art.run.status = RunStatus::positivity_failure;
        art.run.failure_reason = e.what();
        art.run.failure_time = 0.0;
        return art;
    }
    std::vector<SampleCallback> callbacks;
    callbacks.push_back([&](const PerturbationState& s) {
        art.reports.push_back(make_energy_report(s, setup.solver.pressure, setup.solver.w,
                                                 setup.orders, setup.delta_star,
                                                 setup.cross_weights));
    });
    if (setup.write_checkpoints) {
        callbacks.push_back([&, out_dir](const PerturbationState& s) {
            std::ostringstream name;
            name << out_dir << "/checkpoint_" << std::setprecision(17) << s.time << ".mhdt";
            write_checkpoint(name.str(), s);
        });
    }
    art.run = run(setup.solver, initial, callbacks);
    return art;
}

std::string reports_csv(const std::vector<EnergyReport>& reports) {
    std::string out = energy_csv_header() + "\n";
    for (const auto& r : reports) out += energy_csv_row(r) + "\n";
    return out;
}

std::string decay_fit_text(const DecayFit& fit) {
    std::string out;
    out += "model: E(t) = C (1 + alpha t)^(-p)\n";
    out += "C = " + fmt(fit.C) + "\n";
    out += "alpha = " + fmt(fit.alpha) + "\n";
    out += "p = " + fmt(fit.p) + "\n";
    out += "residual_rms_log = " + fmt(fit.residual) + "\n";
    out += std::string("degenerate_constant_series = ") + (fit.degenerate ? "1" : "0") + "\n";
    return out;
}

DecayFit fit_e_phys(const RunResult& run) {
    std::vector<double> t, e;
    for (const auto& s : run.fine)
        if (s.e_phys > 0.0) {
            t.push_back(s.t);
            e.push_back(s.e_phys);
        }
    if (t.size() < 8) {
        DecayFit fit;
        fit.degenerate = true;
        fit.C = e.empty() ? 0.0 : e.front();
        return fit;
    }
    return decay_fit(t, e);
}

} // namespace

int check_diophantine(const Config& cfg, const std::string& out_dir) {
    ensure_dir(out_dir);
    const Vec3 w = cfg.get_vec3("physics.w");
    const double r = cfg.get_double("dio.r");
    const int K = cfg.get_int("dio.K");

    const MarginEntry dot = dot_margin(w, r, K);
    const MarginEntry cross = cross_margin(w, r, K);

    std::string csv = "k1,k2,k3,|k|,dot_value,cross_value\n";
    for (int k1 = -K; k1 <= K; ++k1)
        for (int k2 = -K; k2 <= K; ++k2)
            for (int k3 = -K; k3 <= K; ++k3) {
                const int ns = k1 * k1 + k2 * k2 + k3 * k3;
                if (ns == 0 || ns > K * K) continue;
                const double kabs = std::sqrt(double(ns));
                const double dotv =
                    std::abs(w[0] * k1 + w[1] * k2 + w[2] * k3) * std::pow(kabs, r);
                const double c1 = w[1] * k3 - w[2] * k2;
                const double c2 = w[2] * k1 - w[0] * k3;
                const double c3 = w[0] * k2 - w[1] * k1;
                const double crossv = std::sqrt(c1 * c1 + c2 * c2 + c3 * c3) * std::pow(kabs, r);
                csv += std::to_string(k1) + "," + std::to_string(k2) + "," + std::to_string(k3) +
                       "," + fmt(kabs) + "," + fmt(dotv) + "," + fmt(crossv) + "\n";
            }
    write_text(out_dir + "/margins.csv", csv);

    std::string rep;
    rep += "scenario: check-diophantine\n";
    rep += "w = " + fmt(w[0]) + " " + fmt(w[1]) + " " + fmt(w[2]) + "\n";
    rep += "r = " + fmt(r) + ", band K = " + std::to_string(K) + "\n";
    rep += "dot_margin = " + fmt(dot.margin) + " at k = (" + std::to_string(dot.argmin[0]) + "," +
           std::to_string(dot.argmin[1]) + "," + std::to_string(dot.argmin[2]) + ")\n";
    rep += "cross_margin = " + fmt(cross.margin) + " at k = (" + std::to_string(cross.argmin[0]) +
           "," + std::to_string(cross.argmin[1]) + "," + std::to_string(cross.argmin[2]) + ")\n";
    rep += std::string("diophantine_in_band = ") + (dot.margin > 0.0 ? "yes" : "no") + "\n";
    rep += "\nconfig echo:\n" + cfg.echo();
    write_text(out_dir + "/report.txt", rep);
    return exit_ok;
}

int verify_inequalities(const Config& cfg, const std::string& out_dir) {
    ensure_dir(out_dir);
    const Vec3 w = cfg.get_vec3("physics.w");
    const double r = cfg.get_double("dio.r");
    const double s = cfg.get_double("dio.s");
    const int K = cfg.get_int("dio.K");
    const int samples = cfg.get_int("dio.samples");
    const std::uint64_t seed = cfg.get_u64("init.seed");

    std::string rep;
    rep += "scenario: verify-inequalities\n";
    rep += "w = " + fmt(w[0]) + " " + fmt(w[1]) + " " + fmt(w[2]) + "\n";
    rep += "r = " + fmt(r) + ", s = " + fmt(s) + ", band K = " + std::to_string(K) +
           ", samples = " + std::to_string(samples) + ", seed = " + std::to_string(seed) + "\n\n";

    const TildeCheckResult tilde = tilde_inequality_check(w, K);
    rep += "tilde_inequality: tested " + std::to_string(tilde.tested) + " modes, violations = " +
           std::to_string(tilde.violations.size()) + "\n";

    bool assertion_failed = !tilde.ok;

    // certification grid: the band plus headroom
    int cert_k = K;
    int n_cert = 2 * cert_k + 4;
    if (n_cert % 2 != 0) ++n_cert;
    if (n_cert > 48) { // keep the field-level certification desk sized
        cert_k = 16;
        n_cert = 36;
    }
    const Grid3 cert_grid(n_cert);
    std::mt19937_64 rng(seed);
    const CertificationResult cert = certify_constants(cert_grid, w, s, r, cert_k, samples, rng);
    if (!cert.constants.finite) {
        rep += "empirical_constants: not Diophantine in band (resonant mode found)\n";
    } else {
        rep += "empirical_constants over 0<|k|<=" + std::to_string(cert_k) + ":\n";
        rep += "  K1_emp = " + fmt(cert.constants.k1) + " argmax k = (" +
               std::to_string(cert.constants.k1_argmax[0]) + "," +
               std::to_string(cert.constants.k1_argmax[1]) + "," +
               std::to_string(cert.constants.k1_argmax[2]) + ")\n";
        rep += "  K2_emp = " + fmt(cert.constants.k2) + "\n";
        rep += "  K3_emp = " + fmt(cert.constants.k3) + "\n";
        rep += "  max observed ratios over " + std::to_string(cert.samples) + " fields: " +
               fmt(cert.max_ratio1) + " " + fmt(cert.max_ratio2) + " " + fmt(cert.max_ratio3) +
               "\n";
        const double tol = 1e-12;
        const bool ok1 = cert.max_ratio1 <= cert.constants.k1 * (1.0 + tol);
        const bool ok2 = cert.max_ratio2 <= cert.constants.k2 * (1.0 + tol);
        const bool ok3 = cert.max_ratio3 <= cert.constants.k3 * (1.0 + tol);
        rep += std::string("  inequalities hold at the band constants: ") +
               ((ok1 && ok2 && ok3) ? "yes" : "NO") + "\n";
        if (!(ok1 && ok2 && ok3)) assertion_failed = true;
    }

    std::mt19937_64 rng2(seed + 1);
    const RatioHarnessResult harness = ratio_harness(Grid3(32), s, 5, samples, rng2);
    rep += "\nproduct/commutator/composition/weighted-Poincare ratio maxima (boundedness check):\n";
    rep += "  product = " + fmt(harness.product_ratio_max) + "\n";
    rep += "  commutator = " + fmt(harness.commutator_ratio_max) + "\n";
    rep += "  composition = " + fmt(harness.composition_ratio_max) + "\n";
    rep += "  weighted_poincare = " + fmt(harness.weighted_poincare_ratio_max) + "\n";

    rep += "\nconfig echo:\n" + cfg.echo();
    write_text(out_dir + "/inequality_report.txt", rep);
    return assertion_failed ? exit_assertion_failure : exit_ok;
}

int linear_spectrum(const Config& cfg, const std::string& out_dir) {
    ensure_dir(out_dir);
    const Vec3 w = cfg.get_vec3("physics.w");
    const double nu = cfg.get_double("physics.nu");
    const PressureLaw pl = make_gamma_law(cfg.get_double("physics.gamma"));
    const int K = cfg.get_int("linear.K");

    const BandScanReport scan = band_spectrum_scan(w, pl.beta, nu, K);
    std::string csv = "k1,k2,k3,re_lambda_max,im_at_max,neutral_count\n";
    for (const auto& row : scan.rows)
        csv += std::to_string(row.k[0]) + "," + std::to_string(row.k[1]) + "," +
               std::to_string(row.k[2]) + "," + fmt(row.re_max) + "," + fmt(row.im_at_max) + "," +
               std::to_string(row.neutral_count) + "\n";
    write_text(out_dir + "/spectrum.csv", csv);

    std::string rep;
    rep += "scenario: linear-spectrum\n";
    rep += "beta = " + fmt(pl.beta) + ", nu = " + fmt(nu) + ", band K = " + std::to_string(K) +
           "\n";
    rep += "spectral_abscissa = " + fmt(scan.abscissa) + " at k = (" +
           std::to_string(scan.argmax[0]) + "," + std::to_string(scan.argmax[1]) + "," +
           std::to_string(scan.argmax[2]) + ")\n";
    rep += "modes_with_neutral_directions = " + std::to_string(scan.neutral_modes) + "\n";
    rep += "\nconfig echo:\n" + cfg.echo();
    write_text(out_dir + "/report.txt", rep);
    return exit_ok;
}

int simulate(const Config& cfg, const std::string& out_dir) {
    ensure_dir(out_dir);
    const RunSetup setup = make_run_setup(cfg);
    const RunArtifacts art = run_with_reports(setup, out_dir);

    write_text(out_dir + "/series.csv", reports_csv(art.reports));
    write_text(out_dir + "/fine.csv", fine_csv(art.run));
    const DecayFit fit = fit_e_phys(art.run);
    write_text(out_dir + "/decay_fit.txt", decay_fit_text(fit));

    std::string rep;
    rep += "scenario: simulate (decay-run)\n";
    rep += "status = " + status_text(art.run) + "\n";
    if (art.run.status != RunStatus::completed) {
        rep += "failure_reason = " + art.run.failure_reason + "\n";
        rep += "failure_time = " + fmt(art.run.failure_time) + "\n";
    }
    rep += "steps = " + std::to_string(art.run.steps) + ", dt = " + fmt(art.run.dt) + "\n";
    if (!art.run.fine.empty()) {
        const FineSample& first = art.run.fine.front();
        const FineSample& last = art.run.fine.back();
        rep += "E_phys: " + fmt(first.e_phys) + " -> " + fmt(last.e_phys) + "\n";
        rep += "h_energy: " + fmt(first.h_energy) + " -> " + fmt(last.h_energy) + "\n";
        rep += "rho range observed: [" + fmt(last.rho_min) + ", " + fmt(last.rho_max) + "]\n";
    }
    rep += "fitted decay: C = " + fmt(fit.C) + ", alpha = " + fmt(fit.alpha) +
           ", p = " + fmt(fit.p) + "\n";
    rep += "\nconfig echo:\n" + cfg.echo();
    write_text(out_dir + "/run_summary.txt", rep);
    return art.run.status == RunStatus::completed ? exit_ok : exit_run_failure;
}

int identity_check(const Config& cfg, const std::string& out_dir) {
    ensure_dir(out_dir);
    const RunSetup setup = make_run_setup(cfg);
    const RunArtifacts art = run_with_reports(setup, out_dir);
    write_text(out_dir + "/fine.csv", fine_csv(art.run));

    std::vector<double> t, e, d;
    for (const auto& s : art.run.fine) {
        t.push_back(s.t);
        e.push_back(s.e_phys);
        d.push_back(s.dissipation);
    }
    std::string rep;
    rep += "scenario: identity-check\n";
    rep += "status = " + status_text(art.run) + "\n";
    int code = art.run.status == RunStatus::completed ? exit_ok : exit_run_failure;
    if (t.size() >= 3) {
        const IdentitySeries ids = energy_identity_residual(t, e, d);
        std::string csv = "t,residual_rel\n";
        for (std::size_t i = 0; i < ids.t.size(); ++i)
            csv += fmt(ids.t[i]) + "," + fmt(ids.residual_rel[i]) + "\n";
        write_text(out_dir + "/identity.csv", csv);
        rep += "stencil_order = " + std::to_string(ids.stencil_order) + "\n";
        rep += "max_relative_residual = " + fmt(ids.max_rel) + "\n";
        rep += "tolerance = " + fmt(setup.identity_tol) + "\n";
        if (code == exit_ok && ids.max_rel > setup.identity_tol) code = exit_assertion_failure;
        rep += std::string("within_tolerance = ") +
               (ids.max_rel <= setup.identity_tol ? "yes" : "NO") + "\n";
    } else {
        rep += "series too short for differences\n";
    }
    rep += "\nconfig echo:\n" + cfg.echo();
    write_text(out_dir + "/identity_report.txt", rep);
    return code;
}

int euler_compare(const Config& cfg, const std::string& out_dir) {
    ensure_dir(out_dir);
    Config mag = cfg;
    Config eul = cfg;
    eul.set("physics.w", "0 0 0");

    struct Leg {
        std::string name;
        RunArtifacts art;
    };
    std::vector<Leg> legs;
    for (auto& [name, c] : {std::pair<std::string, Config&>{"magnetized", mag},
                            std::pair<std::string, Config&>{"euler", eul}}) {
        const std::string dir = out_dir + "/" + name;
        ensure_dir(dir);
        const RunSetup setup = make_run_setup(c);
        RunArtifacts art = run_with_reports(setup, dir);
        write_text(dir + "/series.csv", reports_csv(art.reports));
        write_text(dir + "/fine.csv", fine_csv(art.run));
        legs.push_back({name, std::move(art)});
    }

    std::string rep;
    rep += "scenario: euler-compare (w = configured vs w = 0)\n";
    for (const Leg& leg : legs) {
        const RunResult& r = leg.art.run;
        rep += "\n[" + leg.name + "]\n";
        rep += "status = " + status_text(r) + "\n";
        if (r.status != RunStatus::completed)
            rep += "failure: " + r.failure_reason + " at t = " + fmt(r.failure_time) + "\n";
        if (!r.fine.empty()) {
            const FineSample& a = r.fine.front();
            const FineSample& b = r.fine.back();
            rep += "t: " + fmt(a.t) + " -> " + fmt(b.t) + "\n";
            rep += "E_phys: " + fmt(a.e_phys) + " -> " + fmt(b.e_phys) + "\n";
            rep += "h_energy: " + fmt(a.h_energy) + " -> " + fmt(b.h_energy) + "\n";
            rep += "non_h_energy: " + fmt(a.non_h_energy) + " -> " + fmt(b.non_h_energy) + "\n";
            if (a.h_energy > 0.0)
                rep += "h_energy_decay_fraction = " + fmt(1.0 - b.h_energy / a.h_energy) + "\n";
            if (a.non_h_energy > 0.0)
                rep += "non_h_energy_decay_fraction = " +
                       fmt(1.0 - b.non_h_energy / a.non_h_energy) + "\n";
            const DecayFit fit = fit_e_phys(r);
            rep += "fitted p = " + fmt(fit.p) + "\n";
        }
    }
    rep += "\nconfig echo (magnetized leg):\n" + mag.echo();
    write_text(out_dir + "/compare.txt", rep);
    // the magnetized leg is the primary experiment; its hard failure is a run failure
    return legs[0].art.run.status == RunStatus::completed ? exit_ok : exit_run_failure;
}

int decay_fit_file(const std::string& csv_path, const std::string& column,
                   const std::string& out_dir) {
    ensure_dir(out_dir);
    std::ifstream in(csv_path);
    if (!in) throw ConfigError("decay-fit: cannot read " + csv_path);
    std::string header;
    if (!std::getline(in, header)) throw ConfigError("decay-fit: empty file " + csv_path);
    std::vector<std::string> cols;
    {
        std::istringstream hs(header);
        std::string tok;
        while (std::getline(hs, tok, ',')) cols.push_back(tok);
    }
    int t_idx = -1, e_idx = -1;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (cols[i] == "t") t_idx = int(i);
        if (cols[i] == column) e_idx = int(i);
    }
    if (t_idx < 0 || e_idx < 0)
        throw ConfigError("decay-fit: column 't' or '" + column + "' not found in " + csv_path);
    std::vector<double> t, e;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        int idx = 0;
        double tv = 0.0, ev = 0.0;
        while (std::getline(ls, tok, ',')) {
            if (idx == t_idx) tv = std::stod(tok);
            if (idx == e_idx) ev = std::stod(tok);
            ++idx;
        }
        if (ev > 0.0) {
            t.push_back(tv);
            e.push_back(ev);
        }
    }
    const DecayFit fit = decay_fit(t, e);
    write_text(out_dir + "/decay_fit.txt",
               "input: " + csv_path + " column " + column + "\n" + decay_fit_text(fit));
    return exit_ok;
}

} // namespace mhdlab::scenarios
