// Config file handling: flat key = value text with typed keys, dB-suffixed
// keys for dB-valued inputs, exact (shortest round-trip) serialization, and
// the run manifest emitted alongside every output.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavnet/params.hpp"

namespace uavnet::config {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raw config values exactly as they appear in config files. dB-valued keys
/// keep their dB readings here; conversion to the linear NetworkParams
/// happens once in to_params().
struct ConfigValues {
    double lambda_g = 1e-05;  // BS per m^2
    double h_g = 25.0;
    double delta_b = 1.0;
    long n_u = 10;
    double h_u = 100.0;
    double r_u = 1000.0;
    double v_0 = 0.0;
    double sim_radius = 5000.0;
    double p_g = 20.0;
    double p_b = 10.0;
    double p_u = 1.0;
    double eta_g = 4.0;
    double eta_l = 2.5;
    double eta_n = 4.0;
    double c_l_db = -69.8;
    double c_n_db = -69.8;
    long m_l = 3;
    long m_n = 2;
    double access_los_a = 11.95;
    double access_los_b = 0.136;
    double backhaul_los_c = 1.0;
    double backhaul_los_d = 0.106;
    double backhaul_los_e = 1.0;
    double g_g_max_db = 18.0;
    double g_g_min_db = -2.0;
    double theta_g = 0.3490658503988659;  // 20 degrees, radians
    double g_u_max_db = 18.0;
    double g_u_min_db = -2.0;
    double theta_u = 0.3490658503988659;
    double sigma_g = 0.0;  // radians
    double sigma_u = 0.0;
    double sigma_b_sq = 4e-11;  // W
    double tau_a_db = 0.0;
    double tau_b_db = 10.0;

    bool operator==(const ConfigValues&) const = default;
};

/// Parses config text; every canonical key is required and unknown keys are
/// rejected, both with field-level messages. Accepts manifest text as well
/// (keys under the config. prefix).
ConfigValues parse_config_text(const std::string& text);

ConfigValues load_config(const std::string& path);

/// Applies one KEY=VALUE override (the --set flag).
void apply_override(ConfigValues& values, const std::string& assignment);

/// Canonical serialization; numbers use shortest round-trip formatting so
/// parse(serialize(v)) == v exactly.
std::string serialize_config(const ConfigValues& values);

/// Converts to linear-domain parameters (the only place dB is translated)
/// and validates invariants.
NetworkParams to_params(const ConfigValues& values);

struct RunManifest {
    std::string tool_version;
    std::string command;
    std::string mode;
    std::string scheme;
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    int workers = 1;
    bool no_cache = false;
    double wall_time_s = 0.0;
    std::string output_csv;
    std::vector<std::string> warnings;
    ConfigValues config;
};

std::string serialize_manifest(const RunManifest& m);
RunManifest parse_manifest_text(const std::string& text);

}  // namespace uavnet::config
