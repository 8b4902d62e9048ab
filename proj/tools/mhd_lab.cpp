// Command-line front door: scenario presets, config ingestion, run
// orchestration, and report/CSV emission.

#include "mhdlab/scenarios.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "key=value config file");
    cmd->add_option("--out", args.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--override", args.overrides, "KEY=VALUE override (repeatable)");
    cmd->add_option("--seed", args.seed, "overrides init.seed");
}

mhdlab::Config load_config(const CommonArgs& args) {
    mhdlab::Config cfg = args.config_path.empty() ? mhdlab::Config::defaults()
                                                  : mhdlab::Config::from_file(args.config_path);
    for (const std::string& kv : args.overrides) cfg.apply_override(kv);
    if (args.seed) cfg.set("init.seed", std::to_string(*args.seed));
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mhd-lab: pseudo-spectral laboratory for inviscid resistive isentropic MHD on T^3"};
    app.require_subcommand(1);

    CommonArgs check_args, verify_args, linear_args, sim_args, ident_args, euler_args;
    CLI::App* check = app.add_subcommand("check-diophantine",
                                         "band margins min |w.k||k|^r and min |w x k||k|^r");
    add_common(check, check_args);
    CLI::App* verify = app.add_subcommand(
        "verify-inequalities", "empirical Poincare constants, tilde identity, ratio harness");
    add_common(verify, verify_args);
    CLI::App* linear =
        app.add_subcommand("linear-spectrum", "per-mode eigenvalue scan of the linearized system");
    add_common(linear, linear_args);
    CLI::App* sim = app.add_subcommand("simulate", "nonlinear decay run with full diagnostics");
    add_common(sim, sim_args);
    CLI::App* ident =
        app.add_subcommand("identity-check", "energy identity residual along a run");
    add_common(ident, ident_args);
    CLI::App* euler =
        app.add_subcommand("euler-compare", "paired runs: configured w versus w = 0");
    add_common(euler, euler_args);

    CommonArgs fit_args;
    std::string fit_input, fit_column = "E_phys";
    CLI::App* fit = app.add_subcommand("decay-fit", "fit E(t) = C (1 + alpha t)^(-p) to a CSV column");
    fit->add_option("--input", fit_input, "CSV produced by simulate")->required();
    fit->add_option("--column", fit_column, "column to fit")->capture_default_str();
    fit->add_option("--out", fit_args.out_dir, "output directory")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        using namespace mhdlab::scenarios;
        if (check->parsed()) return check_diophantine(load_config(check_args), check_args.out_dir);
        if (verify->parsed())
            return verify_inequalities(load_config(verify_args), verify_args.out_dir);
        if (linear->parsed()) return linear_spectrum(load_config(linear_args), linear_args.out_dir);
        if (sim->parsed()) return simulate(load_config(sim_args), sim_args.out_dir);
        if (ident->parsed()) return identity_check(load_config(ident_args), ident_args.out_dir);
        if (euler->parsed()) return euler_compare(load_config(euler_args), euler_args.out_dir);
        if (fit->parsed()) return decay_fit_file(fit_input, fit_column, fit_args.out_dir);
    } catch (const mhdlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return mhdlab::scenarios::exit_config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
