#pragma once

#include "mhdlab/diagnostics.hpp"
#include "mhdlab/solver.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace mhdlab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat key=value configuration with dotted namespaces. Values are validated
/// against the schema when set, whether they come from the file, an override,
/// or a default. Unknown keys are rejected.
class Config {
public:
    static Config defaults();
    static Config from_file(const std::string& path); // defaults overlaid by the file

    void set(const std::string& key, const std::string& value); // schema-checked
    void apply_override(const std::string& key_equals_value);

    int get_int(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key) const;
    double get_double(const std::string& key) const;
    std::optional<double> get_double_or_auto(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    Vec3 get_vec3(const std::string& key) const;
    std::array<int, 3> get_vec3i(const std::string& key) const;

    /// Sorted key=value listing (the reproducibility echo in every report).
    std::string echo() const;

private:
    std::map<std::string, std::string> kv_;
};

/// Everything a run scenario needs, materialized from a Config.
struct RunSetup {
    SolverConfig solver;
    InitSpec init;
    OrderParams orders;
    double delta_star;
    Vec3 cross_weights;
    std::string out_dir;
    bool write_checkpoints;
    double identity_tol;

    // diophantine / linear scan knobs
    double dio_r;
    double dio_s;
    int dio_K;
    int dio_samples;
    int linear_K;
};
RunSetup make_run_setup(const Config& cfg);

} // namespace mhdlab
