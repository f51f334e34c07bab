#include "qdecoh/config.hpp"

#include "qdecoh/constants.hpp"
#include "qdecoh/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace qdecoh {

using constants::two_pi;

double RunConfig::omega_j() const { return two_pi * f_j; }
double RunConfig::omega_b() const { return two_pi * f_b; }
double RunConfig::omega_c() const { return two_pi * f_c; }
double RunConfig::delta_omega() const {
    return delta_f > 0.0 ? two_pi * delta_f : omega_b() / 10.0;
}

CircuitParams RunConfig::circuit() const {
    return complete_circuit(l_j, r, f_j, temperature);
}

BathWindow RunConfig::window() const { return {omega_b(), omega_c()}; }

BathDiscretization RunConfig::discretization(bool* truncated) const {
    BathDiscretization disc;
    disc.delta_omega = delta_omega();
    if (n_resonators > 0) {
        disc.n_resonators = n_resonators;
        if (truncated) *truncated = false;
        return disc;
    }
    const double wanted = std::ceil(100.0 * omega_c() / disc.delta_omega);
    bool cap = false;
    if (wanted > static_cast<double>(max_resonators)) {
        disc.n_resonators = max_resonators;
        cap = true;
    } else {
        disc.n_resonators = static_cast<std::size_t>(wanted);
    }
    if (truncated) *truncated = cap;
    return disc;
}

namespace {

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double parsed = std::stod(value, &used);
        while (used < value.size() && std::isspace(static_cast<unsigned char>(value[used]))) {
            ++used;
        }
        if (used != value.size()) {
            throw std::invalid_argument("trailing characters");
        }
        return parsed;
    } catch (const std::exception&) {
        throw config_error("invalid numeric value for key '" + key + "': " + value);
    }
}

std::size_t parse_size(const std::string& key, const std::string& value) {
    const double parsed = parse_double(key, value);
    if (parsed < 0.0 || parsed != std::floor(parsed)) {
        throw config_error("key '" + key + "' requires a non-negative integer");
    }
    return static_cast<std::size_t>(parsed);
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> m;
        auto dbl = [&m](const char* key, double RunConfig::* field) {
            m[key] = [field](RunConfig& c, const std::string& k, const std::string& v) {
                c.*field = parse_double(k, v);
            };
        };
        auto num = [&m](const char* key, std::size_t RunConfig::* field) {
            m[key] = [field](RunConfig& c, const std::string& k, const std::string& v) {
                c.*field = parse_size(k, v);
            };
        };
        dbl("l_j", &RunConfig::l_j);
        dbl("r", &RunConfig::r);
        dbl("f_j", &RunConfig::f_j);
        dbl("temperature", &RunConfig::temperature);
        dbl("f_b", &RunConfig::f_b);
        dbl("f_c", &RunConfig::f_c);
        dbl("delta_f", &RunConfig::delta_f);
        num("n_resonators", &RunConfig::n_resonators);
        num("max_resonators", &RunConfig::max_resonators);
        dbl("a0", &RunConfig::a0);
        dbl("delta0", &RunConfig::delta0);
        dbl("evolve_span", &RunConfig::evolve_span);
        num("evolve_points", &RunConfig::evolve_points);
        dbl("oracle_omega_ratio", &RunConfig::oracle_omega_ratio);
        dbl("oracle_step_factor", &RunConfig::oracle_step_factor);
        dbl("sweep_t_min", &RunConfig::sweep_t_min);
        dbl("sweep_t_max", &RunConfig::sweep_t_max);
        num("sweep_points", &RunConfig::sweep_points);
        num("s21_points", &RunConfig::s21_points);
        num("impedance_points", &RunConfig::impedance_points);
        num("noise_points", &RunConfig::noise_points);
        dbl("kk_tol_rel", &RunConfig::kk_tol_rel);
        dbl("kk_tol_abs_frac", &RunConfig::kk_tol_abs_frac);
        dbl("balance_tol", &RunConfig::balance_tol);
        dbl("jn_tol", &RunConfig::jn_tol);
        dbl("loop_tol", &RunConfig::loop_tol);
        dbl("loop_ratio_min", &RunConfig::loop_ratio_min);
        dbl("verify_f_b", &RunConfig::verify_f_b);
        dbl("ringdown_tol", &RunConfig::ringdown_tol);
        dbl("lindblad_tol", &RunConfig::lindblad_tol);
        dbl("hermiticity_tol", &RunConfig::hermiticity_tol);
        dbl("spectrum_tol", &RunConfig::spectrum_tol);
        dbl("frame_tol", &RunConfig::frame_tol);
        dbl("rate_consistency_tol", &RunConfig::rate_consistency_tol);
        dbl("diag_identity_tol", &RunConfig::diag_identity_tol);
        dbl("calibration_tol", &RunConfig::calibration_tol);
        m["out_dir"] = [](RunConfig& c, const std::string&, const std::string& v) {
            c.out_dir = v;
        };
        num("threads", &RunConfig::threads);
        return m;
    }();
    return table;
}

} // namespace

void set_key(RunConfig& config, const std::string& key, const std::string& value) {
    const auto it = setters().find(key);
    if (it == setters().end()) {
        throw config_error("unknown configuration key '" + key + "'");
    }
    it->second(config, key, value);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw config_error("cannot open config file: " + path);
    }
    RunConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw config_error(path + ":" + std::to_string(line_no)
                               + ": expected key = value");
        }
        set_key(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return config;
}

void apply_overrides(RunConfig& config,
                     const std::vector<std::pair<std::string, std::string>>& overrides) {
    for (const auto& [key, value] : overrides) {
        set_key(config, key, value);
    }
}

void validate(const RunConfig& config) {
    auto positive = [](double v, const char* field) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw config_error(std::string("config field '") + field
                               + "' must be positive and finite");
        }
    };
    positive(config.l_j, "l_j");
    positive(config.r, "r");
    positive(config.f_j, "f_j");
    positive(config.f_b, "f_b");
    positive(config.f_c, "f_c");
    if (!(config.temperature >= 0.0) || !std::isfinite(config.temperature)) {
        throw config_error("config field 'temperature' must be non-negative and finite");
    }
    if (!(config.f_b < config.f_c)) {
        throw config_error("config requires f_b < f_c");
    }
    if (config.delta_f < 0.0) {
        throw config_error("config field 'delta_f' must be non-negative");
    }
    if (!(config.a0 >= 0.0 && config.a0 <= 1.0)) {
        throw config_error("config field 'a0' must lie in [0, 1]");
    }
    positive(config.sweep_t_min, "sweep_t_min");
    positive(config.sweep_t_max, "sweep_t_max");
    if (!(config.sweep_t_min < config.sweep_t_max)) {
        throw config_error("config requires sweep_t_min < sweep_t_max");
    }
    if (config.sweep_points < 2 || config.evolve_points < 2 || config.noise_points < 2
        || config.s21_points < 2 || config.impedance_points < 2) {
        throw config_error("grid point counts must be at least 2");
    }
    positive(config.verify_f_b, "verify_f_b");
}

} // namespace qdecoh
