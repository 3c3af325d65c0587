#include "uavnet/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>

namespace uavnet::config {

namespace {

struct Key {
    const char* name;
    std::variant<double ConfigValues::*, long ConfigValues::*> member;
};

constexpr int kKeyCount = 34;

const Key kKeys[kKeyCount] = {
    {"lambda_g", &ConfigValues::lambda_g},
    {"h_g", &ConfigValues::h_g},
    {"delta_b", &ConfigValues::delta_b},
    {"n_u", &ConfigValues::n_u},
    {"h_u", &ConfigValues::h_u},
    {"r_u", &ConfigValues::r_u},
    {"v_0", &ConfigValues::v_0},
    {"sim_radius", &ConfigValues::sim_radius},
    {"p_g", &ConfigValues::p_g},
    {"p_b", &ConfigValues::p_b},
    {"p_u", &ConfigValues::p_u},
    {"eta_g", &ConfigValues::eta_g},
    {"eta_l", &ConfigValues::eta_l},
    {"eta_n", &ConfigValues::eta_n},
    {"c_l_db", &ConfigValues::c_l_db},
    {"c_n_db", &ConfigValues::c_n_db},
    {"m_l", &ConfigValues::m_l},
    {"m_n", &ConfigValues::m_n},
    {"access_los_a", &ConfigValues::access_los_a},
    {"access_los_b", &ConfigValues::access_los_b},
    {"backhaul_los_c", &ConfigValues::backhaul_los_c},
    {"backhaul_los_d", &ConfigValues::backhaul_los_d},
    {"backhaul_los_e", &ConfigValues::backhaul_los_e},
    {"g_g_max_db", &ConfigValues::g_g_max_db},
    {"g_g_min_db", &ConfigValues::g_g_min_db},
    {"theta_g", &ConfigValues::theta_g},
    {"g_u_max_db", &ConfigValues::g_u_max_db},
    {"g_u_min_db", &ConfigValues::g_u_min_db},
    {"theta_u", &ConfigValues::theta_u},
    {"sigma_g", &ConfigValues::sigma_g},
    {"sigma_u", &ConfigValues::sigma_u},
    {"sigma_b_sq", &ConfigValues::sigma_b_sq},
    {"tau_a_db", &ConfigValues::tau_a_db},
    {"tau_b_db", &ConfigValues::tau_b_db},
};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ConfigError("config: key `" + key + "` has non-numeric value `" + text + "`");
    return v;
}

long parse_long(const std::string& key, const std::string& text) {
    long v = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ConfigError("config: key `" + key + "` must be an integer, got `" + text + "`");
    return v;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void set_key(ConfigValues& values, const std::string& key, const std::string& text) {
    for (const auto& k : kKeys) {
        if (key != k.name) continue;
        if (std::holds_alternative<double ConfigValues::*>(k.member))
            values.*std::get<double ConfigValues::*>(k.member) = parse_double(key, text);
        else
            values.*std::get<long ConfigValues::*>(k.member) = parse_long(key, text);
        return;
    }
    throw ConfigError("config: unknown key `" + key + "`");
}

}  // namespace

ConfigValues parse_config_text(const std::string& text) {
    ConfigValues values;
    std::map<std::string, bool> seen;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(line_no) + " is not `key = value`");
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.rfind("config.", 0) == 0) key = key.substr(7);  // manifest form
        bool is_config_key = false;
        for (const auto& k : kKeys) is_config_key |= key == k.name;
        if (!is_config_key) {
            // tolerate manifest run keys; reject anything else
            static const char* run_keys[] = {"tool_version", "command",  "mode",    "scheme",
                                             "seed",         "trials",   "workers", "no_cache",
                                             "wall_time_s",  "output_csv", "warning"};
            bool is_run_key = false;
            for (const char* rk : run_keys) is_run_key |= key == rk;
            if (!is_run_key) throw ConfigError("config: unknown key `" + key + "`");
            continue;
        }
        set_key(values, key, value);
        seen[key] = true;
    }
    for (const auto& k : kKeys)
        if (!seen.count(k.name))
            throw ConfigError("config: missing required key `" + std::string(k.name) + "`");
    return values;
}

ConfigValues load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open `" + path + "`");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

void apply_override(ConfigValues& values, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override must be KEY=VALUE, got `" + assignment + "`");
    const std::string key = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    set_key(values, key, value);
}

std::string serialize_config(const ConfigValues& values) {
    std::ostringstream out;
    for (const auto& k : kKeys) {
        out << k.name << " = ";
        if (std::holds_alternative<double ConfigValues::*>(k.member))
            out << format_double(values.*std::get<double ConfigValues::*>(k.member));
        else
            out << values.*std::get<long ConfigValues::*>(k.member);
        out << "\n";
    }
    return out.str();
}

NetworkParams to_params(const ConfigValues& v) {
    NetworkParams p;
    p.geom.lambda_g = v.lambda_g;
    p.geom.h_g = v.h_g;
    p.geom.delta_b = v.delta_b;
    p.geom.n_u = static_cast<int>(v.n_u);
    p.geom.h_u = v.h_u;
    p.geom.r_u = v.r_u;
    p.geom.v_0 = v.v_0;
    p.geom.sim_radius = v.sim_radius;
    p.p_g = v.p_g;
    p.p_b = v.p_b;
    p.p_u = v.p_u;
    p.eta_g = v.eta_g;
    p.eta_l = v.eta_l;
    p.eta_n = v.eta_n;
    p.c_l = db_to_linear(v.c_l_db);
    p.c_n = db_to_linear(v.c_n_db);
    p.fading.m_l = static_cast<int>(v.m_l);
    p.fading.m_n = static_cast<int>(v.m_n);
    p.access_los.a = v.access_los_a;
    p.access_los.b = v.access_los_b;
    p.backhaul_los.c = v.backhaul_los_c;
    p.backhaul_los.d = v.backhaul_los_d;
    p.backhaul_los.e = v.backhaul_los_e;
    p.ant_bs.g_max = db_to_linear(v.g_g_max_db);
    p.ant_bs.g_min = db_to_linear(v.g_g_min_db);
    p.ant_bs.theta = v.theta_g;
    p.ant_uav.g_max = db_to_linear(v.g_u_max_db);
    p.ant_uav.g_min = db_to_linear(v.g_u_min_db);
    p.ant_uav.theta = v.theta_u;
    p.sigma_g = v.sigma_g;
    p.sigma_u = v.sigma_u;
    p.noise_b = v.sigma_b_sq;
    p.tau_a = db_to_linear(v.tau_a_db);
    p.tau_b = db_to_linear(v.tau_b_db);
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return p;
}

std::string serialize_manifest(const RunManifest& m) {
    std::ostringstream out;
    out << "tool_version = " << m.tool_version << "\n";
    out << "command = " << m.command << "\n";
    out << "mode = " << m.mode << "\n";
    out << "scheme = " << m.scheme << "\n";
    out << "seed = " << m.seed << "\n";
    out << "trials = " << m.trials << "\n";
    out << "workers = " << m.workers << "\n";
    out << "no_cache = " << (m.no_cache ? 1 : 0) << "\n";
    out << "wall_time_s = " << format_double(m.wall_time_s) << "\n";
    out << "output_csv = " << m.output_csv << "\n";
    for (const auto& w : m.warnings) out << "warning = " << w << "\n";
    std::istringstream cfg(serialize_config(m.config));
    std::string line;
    while (std::getline(cfg, line))
        if (!line.empty()) out << "config." << line << "\n";
    return out.str();
}

RunManifest parse_manifest_text(const std::string& text) {
    RunManifest m;
    m.config = parse_config_text(text);  // reads the config.* keys
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "tool_version") m.tool_version = value;
        else if (key == "command") m.command = value;
        else if (key == "mode") m.mode = value;
        else if (key == "scheme") m.scheme = value;
        else if (key == "seed") m.seed = std::stoull(value);
        else if (key == "trials") m.trials = std::stoull(value);
        else if (key == "workers") m.workers = std::stoi(value);
        else if (key == "no_cache") m.no_cache = value == "1" || value == "true";
        else if (key == "wall_time_s") m.wall_time_s = parse_double(key, value);
        else if (key == "output_csv") m.output_csv = value;
        else if (key == "warning") m.warnings.push_back(value);
    }
    return m;
}

}  // namespace uavnet::config
