#include "mhdlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mhdlab {

namespace {

enum class ValueType { Int, U64, Double, DoubleOrAuto, Bool, String, Vec3d, Vec3i };

const std::map<std::string, ValueType>& schema() {
    static const std::map<std::string, ValueType> s = {
        {"grid.n", ValueType::Int},
        {"time.dt", ValueType::DoubleOrAuto},
        {"time.t_end", ValueType::Double},
        {"physics.nu", ValueType::Double},
        {"physics.gamma", ValueType::Double},
        {"physics.w", ValueType::Vec3d},
        {"init.kind", ValueType::String},
        {"init.amplitude", ValueType::Double},
        {"init.seed", ValueType::U64},
        {"init.kmax", ValueType::Int},
        {"init.mode", ValueType::Vec3i},
        {"init.component", ValueType::Int},
        {"output.cadence", ValueType::Double},
        {"output.dir", ValueType::String},
        {"output.checkpoints", ValueType::Bool},
        {"solver.cfl", ValueType::Double},
        {"solver.window", ValueType::Vec3d}, // two values used; third ignored if given
        {"orders.L", ValueType::Int},
        {"orders.M", ValueType::Int},
        {"orders.N", ValueType::Int},
        {"orders.d", ValueType::Int},
        {"orders.r", ValueType::Double},
        {"diag.delta_star", ValueType::Double},
        {"diag.weights", ValueType::Vec3d},
        {"identity.tol", ValueType::Double},
        {"dio.r", ValueType::Double},
        {"dio.s", ValueType::Double},
        {"dio.K", ValueType::Int},
        {"dio.samples", ValueType::Int},
        {"linear.K", ValueType::Int},
    };
    return s;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_doubles(const std::string& key, const std::string& v, std::size_t want) {
    std::string cleaned = v;
    std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
    std::istringstream in(cleaned);
    std::vector<double> out;
    double x;
    while (in >> x) out.push_back(x);
    if (out.size() < want)
        throw ConfigError("config: key '" + key + "' needs " + std::to_string(want) +
                          " numbers, got '" + v + "'");
    return out;
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (trim(v.substr(pos)).empty() && std::isfinite(x)) return x;
    } catch (...) {
    }
    throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
}

void validate(const std::string& key, const std::string& value) {
    const auto it = schema().find(key);
    if (it == schema().end()) throw ConfigError("config: unknown key '" + key + "'");
    switch (it->second) {
        case ValueType::Int: {
            const double x = parse_double(key, value);
            if (x != std::floor(x))
                throw ConfigError("config: key '" + key + "' expects an integer");
            break;
        }
        case ValueType::U64: {
            try {
                std::size_t pos = 0;
                (void)std::stoull(value, &pos);
                if (!trim(value.substr(pos)).empty()) throw ConfigError("");
            } catch (...) {
                throw ConfigError("config: key '" + key + "' expects an unsigned integer");
            }
            break;
        }
        case ValueType::Double:
            parse_double(key, value);
            break;
        case ValueType::DoubleOrAuto:
            if (value != "auto") parse_double(key, value);
            break;
        case ValueType::Bool:
            if (value != "0" && value != "1" && value != "true" && value != "false")
                throw ConfigError("config: key '" + key + "' expects 0/1/true/false");
            break;
        case ValueType::String:
            break;
        case ValueType::Vec3d:
            parse_doubles(key, value, key == "solver.window" ? 2 : 3);
            break;
        case ValueType::Vec3i: {
            const auto xs = parse_doubles(key, value, 3);
            for (double x : xs)
                if (x != std::floor(x))
                    throw ConfigError("config: key '" + key + "' expects integers");
            break;
        }
    }
}

} // namespace

Config Config::defaults() {
    Config c;
    c.set("grid.n", "32");
    c.set("time.dt", "auto");
    c.set("time.t_end", "10");
    c.set("physics.nu", "1");
    c.set("physics.gamma", "1.4");
    // 2 * (1, sqrt 2, sqrt 3)
    c.set("physics.w", "2 2.8284271247461903 3.4641016151377544");
    c.set("init.kind", "random");
    c.set("init.amplitude", "0.01");
    c.set("init.seed", "20260808");
    c.set("init.kmax", "1");
    c.set("init.mode", "1 0 0");
    c.set("init.component", "2");
    c.set("output.cadence", "0.05");
    c.set("output.dir", "out");
    c.set("output.checkpoints", "0");
    c.set("solver.cfl", "0.4");
    c.set("solver.window", "0.5 1.5");
    c.set("orders.L", "1");
    c.set("orders.M", "2");
    c.set("orders.N", "3");
    c.set("orders.d", "7");
    c.set("orders.r", "1");
    c.set("diag.delta_star", "0.001");
    c.set("diag.weights", "1 1 1");
    c.set("identity.tol", "1e-4");
    c.set("dio.r", "3");
    c.set("dio.s", "3");
    c.set("dio.K", "20");
    c.set("dio.samples", "100");
    c.set("linear.K", "8");
    return c;
}

Config Config::from_file(const std::string& path) {
    Config c = defaults();
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot read " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: " + path + ":" + std::to_string(lineno) +
                              ": expected key = value");
        c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return c;
}

void Config::set(const std::string& key, const std::string& value) {
    validate(key, value);
    kv_[key] = value;
}

void Config::apply_override(const std::string& kvs) {
    const auto eq = kvs.find('=');
    if (eq == std::string::npos)
        throw ConfigError("config: override must be KEY=VALUE, got '" + kvs + "'");
    set(trim(kvs.substr(0, eq)), trim(kvs.substr(eq + 1)));
}

int Config::get_int(const std::string& key) const {
    return static_cast<int>(get_double(key));
}

std::uint64_t Config::get_u64(const std::string& key) const {
    return std::stoull(get_string(key));
}

double Config::get_double(const std::string& key) const {
    return parse_double(key, get_string(key));
}

std::optional<double> Config::get_double_or_auto(const std::string& key) const {
    const std::string v = get_string(key);
    if (v == "auto") return std::nullopt;
    return parse_double(key, v);
}

bool Config::get_bool(const std::string& key) const {
    const std::string v = get_string(key);
    return v == "1" || v == "true";
}

std::string Config::get_string(const std::string& key) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("config: key '" + key + "' is not set");
    return it->second;
}

Vec3 Config::get_vec3(const std::string& key) const {
    const auto xs = parse_doubles(key, get_string(key), key == "solver.window" ? 2 : 3);
    Vec3 out{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < std::min<std::size_t>(3, xs.size()); ++i) out[i] = xs[i];
    return out;
}

std::array<int, 3> Config::get_vec3i(const std::string& key) const {
    const auto xs = parse_doubles(key, get_string(key), 3);
    return {int(xs[0]), int(xs[1]), int(xs[2])};
}

std::string Config::echo() const {
    std::string out;
    for (const auto& [k, v] : kv_) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

RunSetup make_run_setup(const Config& cfg) {
    const Grid3 grid(cfg.get_int("grid.n"));
    RunSetup s{SolverConfig(grid),
               InitSpec{},
               OrderParams{},
               0.0,
               {1.0, 1.0, 1.0},
               "out",
               false,
               1e-4,
               3.0,
               3.0,
               20,
               100,
               8};

    s.solver.dt = cfg.get_double_or_auto("time.dt");
    s.solver.t_end = cfg.get_double("time.t_end");
    s.solver.nu = cfg.get_double("physics.nu");
    s.solver.pressure = make_gamma_law(cfg.get_double("physics.gamma"));
    s.solver.w = cfg.get_vec3("physics.w");
    s.solver.cfl_number = cfg.get_double("solver.cfl");
    const Vec3 win = cfg.get_vec3("solver.window");
    s.solver.positivity_window = {win[0], win[1]};
    s.solver.output_cadence = cfg.get_double("output.cadence");

    const std::string kind = cfg.get_string("init.kind");
    if (kind == "zero")
        s.init.kind = InitSpec::Kind::zero;
    else if (kind == "random")
        s.init.kind = InitSpec::Kind::random;
    else if (kind == "single-h-mode")
        s.init.kind = InitSpec::Kind::single_h_mode;
    else
        throw ConfigError("config: init.kind must be zero, random, or single-h-mode");
    s.init.amplitude = cfg.get_double("init.amplitude");
    s.init.seed = cfg.get_u64("init.seed");
    s.init.kmax = cfg.get_int("init.kmax");
    s.init.mode = cfg.get_vec3i("init.mode");
    s.init.component = cfg.get_int("init.component");

    s.orders.L = cfg.get_int("orders.L");
    s.orders.M = cfg.get_int("orders.M");
    s.orders.N = cfg.get_int("orders.N");
    s.orders.d = cfg.get_int("orders.d");
    s.orders.r = cfg.get_double("orders.r");
    s.orders.validate();

    s.delta_star = cfg.get_double("diag.delta_star");
    s.cross_weights = cfg.get_vec3("diag.weights");
    s.out_dir = cfg.get_string("output.dir");
    s.write_checkpoints = cfg.get_bool("output.checkpoints");
    s.identity_tol = cfg.get_double("identity.tol");

    s.dio_r = cfg.get_double("dio.r");
    s.dio_s = cfg.get_double("dio.s");
    s.dio_K = cfg.get_int("dio.K");
    s.dio_samples = cfg.get_int("dio.samples");
    s.linear_K = cfg.get_int("linear.K");
    return s;
}

} // namespace mhdlab
