#include "rydgate/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace rydgate {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid number for " + key + ": '" + value + "'");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("invalid integer for " + key + ": '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("invalid boolean for " + key + ": '" + value + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
    if (out.empty()) throw ConfigError("empty list for " + key);
    return out;
}

std::vector<std::vector<double>> parse_matrix(const std::string& key, const std::string& value) {
    std::vector<std::vector<double>> rows;
    std::stringstream ss(value);
    std::string row;
    while (std::getline(ss, row, ';')) rows.push_back(parse_list(key, trim(row)));
    if (rows.empty()) throw ConfigError("empty matrix for " + key);
    return rows;
}

struct Entry {
    std::string value;
    bool present = false;
};

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    static const std::map<std::string, std::vector<std::string>> kKnownKeys = {
        {"", {"preset"}},
        {"atoms", {"n"}},
        {"lasers", {"delta_ghz", "omega_c_mhz", "omega_p_max_mhz", "t_raman_us"}},
        {"decay", {"gamma_p_per_us", "tau_r_us"}},
        {"interactions", {"v_control_over_eps", "v_ensemble_over_eps"}},
        {"sweep",
         {"experiment", "points", "start", "stop", "log", "x_max_list", "workers"}},
    };

    std::map<std::string, Entry> entries;  // "section/key" -> value
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto comment = raw.find('#');
        if (comment != std::string::npos) raw.erase(comment);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("malformed section header at line " + std::to_string(line_no));
            section = trim(line.substr(1, line.size() - 2));
            if (kKnownKeys.find(section) == kKnownKeys.end())
                throw ConfigError("unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key=value at line " + std::to_string(line_no));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto& allowed = kKnownKeys.at(section);
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
        entries[section + "/" + key] = Entry{value, true};
    }

    auto get = [&](const std::string& path) -> const Entry& {
        static const Entry kMissing;
        const auto it = entries.find(path);
        return it == entries.end() ? kMissing : it->second;
    };

    RunConfig config;
    const Entry& preset = get("/preset");
    if (preset.present) {
        if (preset.value != "rb87")
            throw ConfigError("unknown preset '" + preset.value + "'");
        config.used_preset = true;
    }

    const int n = get("atoms/n").present ? parse_int("n", get("atoms/n").value) : 1;
    if (n < 0) throw ConfigError("n must be >= 0");

    PhysParams p;
    double v_control_scalar = 0.0;
    std::vector<double> v_control_list;
    double v_ensemble_scalar = 0.0;
    std::vector<std::vector<double>> v_ensemble_rows;
    if (config.used_preset) {
        p = rb87_preset(n);
        v_control_scalar = 40.0;
    } else {
        p.n_atoms = n;
        p.v_control.assign(static_cast<std::size_t>(n), 0.0);
        p.v_ensemble.assign(static_cast<std::size_t>(n),
                            std::vector<double>(static_cast<std::size_t>(n), 0.0));
    }

    if (get("lasers/delta_ghz").present)
        p.delta = kTwoPi * 1e9 * parse_double("delta_ghz", get("lasers/delta_ghz").value);
    if (get("lasers/omega_c_mhz").present)
        p.omega_c = kTwoPi * 1e6 * parse_double("omega_c_mhz", get("lasers/omega_c_mhz").value);
    if (get("lasers/omega_p_max_mhz").present)
        p.omega_p_max =
            kTwoPi * 1e6 * parse_double("omega_p_max_mhz", get("lasers/omega_p_max_mhz").value);
    if (get("decay/gamma_p_per_us").present)
        p.gamma_p = 1e6 * parse_double("gamma_p_per_us", get("decay/gamma_p_per_us").value);
    if (get("decay/tau_r_us").present)
        p.tau_r = 1e-6 * parse_double("tau_r_us", get("decay/tau_r_us").value);

    if (!config.used_preset &&
        (p.delta <= 0.0 || p.omega_c <= 0.0 || p.omega_p_max <= 0.0))
        throw ConfigError("delta_ghz, omega_c_mhz and omega_p_max_mhz are required without a preset");

    if (get("lasers/t_raman_us").present) {
        p.t_raman = 1e-6 * parse_double("t_raman_us", get("lasers/t_raman_us").value);
    } else {
        p.t_raman = pi_pulse_duration(p.delta, p.omega_p_max);
    }

    const double eps = epsilon(p);
    const Entry& vc = get("interactions/v_control_over_eps");
    if (vc.present) {
        v_control_list = parse_list("v_control_over_eps", vc.value);
        if (v_control_list.size() == 1) {
            v_control_scalar = v_control_list[0];
            v_control_list.clear();
        } else if (static_cast<int>(v_control_list.size()) != n) {
            throw ConfigError("v_control_over_eps needs 1 or n entries");
        }
    }
    if (v_control_list.empty()) {
        p.v_control.assign(static_cast<std::size_t>(n), v_control_scalar * eps);
    } else {
        p.v_control.resize(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k)
            p.v_control[static_cast<std::size_t>(k)] = v_control_list[static_cast<std::size_t>(k)] * eps;
    }

    const Entry& ve = get("interactions/v_ensemble_over_eps");
    if (ve.present) {
        v_ensemble_rows = parse_matrix("v_ensemble_over_eps", ve.value);
        if (v_ensemble_rows.size() == 1 && v_ensemble_rows[0].size() == 1) {
            v_ensemble_scalar = v_ensemble_rows[0][0];
            v_ensemble_rows.clear();
        } else if (static_cast<int>(v_ensemble_rows.size()) != n) {
            throw ConfigError("v_ensemble_over_eps needs a scalar or n rows");
        }
    }
    p.v_ensemble.assign(static_cast<std::size_t>(n),
                        std::vector<double>(static_cast<std::size_t>(n), 0.0));
    if (v_ensemble_rows.empty()) {
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (j != k)
                    p.v_ensemble[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
                        v_ensemble_scalar * eps;
    } else {
        for (int j = 0; j < n; ++j) {
            if (static_cast<int>(v_ensemble_rows[static_cast<std::size_t>(j)].size()) != n)
                throw ConfigError("v_ensemble_over_eps rows must have n entries");
            for (int k = 0; k < n; ++k)
                p.v_ensemble[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
                    v_ensemble_rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] * eps;
        }
    }

    p.validate();
    config.params = std::move(p);

    if (get("sweep/experiment").present) config.sweep.experiment = get("sweep/experiment").value;
    if (get("sweep/points").present)
        config.sweep.points = parse_int("points", get("sweep/points").value);
    if (get("sweep/start").present)
        config.sweep.start = parse_double("start", get("sweep/start").value);
    if (get("sweep/stop").present) config.sweep.stop = parse_double("stop", get("sweep/stop").value);
    if (get("sweep/log").present) config.sweep.log_spaced = parse_bool("log", get("sweep/log").value);
    if (get("sweep/x_max_list").present)
        config.sweep.x_max_list = parse_list("x_max_list", get("sweep/x_max_list").value);
    if (get("sweep/workers").present)
        config.sweep.workers = parse_int("workers", get("sweep/workers").value);
    return config;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

std::string preset_dump_text(int n_atoms) {
    const PhysParams p = rb87_preset(n_atoms);
    const DerivedScales d = derived_scales(p);
    char buf[256];
    std::ostringstream out;
    out << "# rydgate rb87 preset\n";
    out << "preset=rb87\n";
    out << "[atoms]\n";
    out << "n=" << n_atoms << "\n";
    out << "[lasers]\n";
    std::snprintf(buf, sizeof(buf), "delta_ghz=%.17g\n", p.delta / (kTwoPi * 1e9));
    out << buf;
    std::snprintf(buf, sizeof(buf), "omega_c_mhz=%.17g\n", p.omega_c / (kTwoPi * 1e6));
    out << buf;
    std::snprintf(buf, sizeof(buf), "omega_p_max_mhz=%.17g\n", p.omega_p_max / (kTwoPi * 1e6));
    out << buf;
    std::snprintf(buf, sizeof(buf), "t_raman_us=%.17g\n", p.t_raman * 1e6);
    out << buf;
    out << "[decay]\n";
    std::snprintf(buf, sizeof(buf), "gamma_p_per_us=%.17g\n", p.gamma_p / 1e6);
    out << buf;
    std::snprintf(buf, sizeof(buf), "tau_r_us=%.17g\n", p.tau_r * 1e6);
    out << buf;
    out << "[interactions]\n";
    out << "v_control_over_eps=40\n";
    out << "v_ensemble_over_eps=0\n";
    std::snprintf(buf, sizeof(buf), "# epsilon_mhz=%.6f (as nu = omega/2pi)\n",
                  d.epsilon / (kTwoPi * 1e6));
    out << buf;
    std::snprintf(buf, sizeof(buf), "# x_max=%.6f\n", d.x_max);
    out << buf;
    return out.str();
}

}  // namespace rydgate
