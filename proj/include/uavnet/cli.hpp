// Batch front-end: scenario evaluation, parameter sweeps, bundled figure
// reproduction against digitized reference curves, and analytic-vs-simulation
// validation. Emits CSV plus a machine-readable run manifest per run.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uavnet/config.hpp"
#include "uavnet/simulator.hpp"

namespace uavnet::cli {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kCsvHeader =
    "sweep_var,value,scheme,mode,p_cov,p_cov_g,p_cov_ul,p_cov_un,a_g,a_ul,a_un,a_f,"
    "s_backhaul,ci_low,ci_high,n_trials";

struct RunOptions {
    std::string mode = "analytic";  // analytic | simulate | both
    std::string scheme = "aware";   // unaware | aware | instantaneous
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    int workers = 1;
    bool no_cache = false;
    std::string out_path = "out.csv";
    std::vector<std::string> overrides;  // KEY=VALUE
    double slack = 0.02;                 // validate tolerance beyond the CI
    std::string data_dir;                // reference-data override
};

/// Exit codes shared by the CLI surface.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNonConvergence = 3;
inline constexpr int kExitValidationFailed = 4;

/// One row of the fixed CSV schema. Unset optionals serialize as empty cells.
struct CsvRow {
    std::string sweep_var = "none";
    double value = 0.0;
    std::string scheme;
    std::string mode;
    std::optional<double> p_cov, p_cov_g, p_cov_ul, p_cov_un;
    std::optional<double> a_g, a_ul, a_un, a_f, s_backhaul;
    std::optional<double> ci_low, ci_high;
    std::uint64_t n_trials = 0;
};

std::string format_csv(const std::vector<CsvRow>& rows);

CsvRow analytic_row(const NetworkParams& params, simulator::Scheme scheme, bool no_cache,
                    std::vector<std::string>* warnings = nullptr);
CsvRow simulate_row(const NetworkParams& params, simulator::Scheme scheme, std::uint64_t trials,
                    std::uint64_t seed, int workers);

/// Single-point evaluation.
int cmd_eval(const std::string& config_path, const RunOptions& opt);

/// One row (or two, in mode both) per sweep value, in input order.
int cmd_sweep(const std::string& config_path, const std::string& sweep_var,
              const std::vector<double>& values, const RunOptions& opt);

/// Recomputes one bundled figure and reports deviations from the digitized
/// reference points.
int cmd_reproduce(const std::string& figure_id, const RunOptions& opt);

/// Analytic-vs-simulation comparison; PASS iff every analytic metric lies in
/// the simulated 95% CI widened by opt.slack.
int cmd_validate(const std::string& config_path, const RunOptions& opt);

/// Location of the bundled data directory (reference curves, configs).
std::string default_data_dir();

}  // namespace uavnet::cli
