#pragma once

#include "mhdlab/config.hpp"

#include <string>

namespace mhdlab::scenarios {

// Exit codes shared by the library layer and the CLI.
inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_run_failure = 3;
inline constexpr int exit_assertion_failure = 4;

/// Each scenario writes its artifact set under out_dir (created if missing)
/// and returns an exit code. Failures of a run are reported as data: the
/// artifacts are still written.
int check_diophantine(const Config& cfg, const std::string& out_dir);
int verify_inequalities(const Config& cfg, const std::string& out_dir);
int linear_spectrum(const Config& cfg, const std::string& out_dir);
int simulate(const Config& cfg, const std::string& out_dir); // decay-run scenario
int identity_check(const Config& cfg, const std::string& out_dir);
int euler_compare(const Config& cfg, const std::string& out_dir);
int decay_fit_file(const std::string& csv_path, const std::string& column,
                   const std::string& out_dir);

} // namespace mhdlab::scenarios
