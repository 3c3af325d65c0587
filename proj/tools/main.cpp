// uavnet: coverage analysis of a UAV-assisted cellular downlink with mmWave
// backhaul. Subcommands: eval, sweep, reproduce, validate.
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uavnet/cli.hpp"
#include "uavnet/numerics.hpp"

namespace {

// "a:b:step" ranges or comma-separated lists
std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const auto colon2 = text.find(':', colon + 1);
        if (colon2 == std::string::npos)
            throw uavnet::config::ConfigError("range must be start:stop:step, got `" + text + "`");
        const double start = std::stod(text.substr(0, colon));
        const double stop = std::stod(text.substr(colon + 1, colon2 - colon - 1));
        const double step = std::stod(text.substr(colon2 + 1));
        if (!(step > 0.0)) throw uavnet::config::ConfigError("range step must be > 0");
        for (double v = start; v <= stop + 1e-9 * step; v += step) out.push_back(v);
        return out;
    }
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ','))
        if (!token.empty()) out.push_back(std::stod(token));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace uavnet;

    CLI::App app{"Coverage analysis for a hybrid aerial-terrestrial downlink with mmWave backhaul"};
    app.require_subcommand(1);

    cli::RunOptions opt;
    std::string config_path, sweep_var, sweep_values, figure_id;

    const auto add_common = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config)
            cmd->add_option("--config", config_path, "scenario config file")->required();
        cmd->add_option("--mode", opt.mode, "analytic|simulate|both");
        cmd->add_option("--scheme", opt.scheme, "unaware|aware|instantaneous");
        cmd->add_option("--set", opt.overrides, "config override KEY=VALUE (repeatable)");
        cmd->add_option("--trials", opt.trials, "simulation trial count");
        cmd->add_option("--seed", opt.seed, "base RNG seed");
        cmd->add_option("--out", opt.out_path, "output CSV path (manifest written alongside)");
        cmd->add_option("--workers", opt.workers, "worker thread count");
        cmd->add_flag("--no-cache", opt.no_cache, "disable analytic survival-integral caching");
        cmd->add_option("--data-dir", opt.data_dir, "bundled data directory override");
    };

    auto* eval_cmd = app.add_subcommand("eval", "evaluate one scenario");
    add_common(eval_cmd, true);

    auto* sweep_cmd = app.add_subcommand("sweep", "sweep one config key");
    add_common(sweep_cmd, true);
    sweep_cmd->add_option("--var", sweep_var, "config key to sweep")->required();
    sweep_cmd->add_option("--values", sweep_values, "comma list or start:stop:step")->required();

    auto* repro_cmd = app.add_subcommand("reproduce", "recompute a bundled figure");
    add_common(repro_cmd, false);
    repro_cmd->add_option("--figure", figure_id, "figure id (see --list)")->required();

    auto* validate_cmd = app.add_subcommand("validate", "analytic vs simulation comparison");
    add_common(validate_cmd, true);
    validate_cmd->add_option("--slack", opt.slack, "tolerance beyond the simulation CI");

    // reproduce defaults: simulation only enters through the instantaneous
    // curves, where a smaller trial count keeps the recipe interactive
    opt.trials = 100000;

    CLI11_PARSE(app, argc, argv);

    try {
        if (*eval_cmd) return cli::cmd_eval(config_path, opt);
        if (*sweep_cmd) return cli::cmd_sweep(config_path, sweep_var, parse_values(sweep_values), opt);
        if (*repro_cmd) {
            if (!repro_cmd->count("--trials")) opt.trials = 5000;
            return cli::cmd_reproduce(figure_id, opt);
        }
        if (*validate_cmd) return cli::cmd_validate(config_path, opt);
    } catch (const config::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return cli::kExitConfigError;
    } catch (const numerics::NonConvergence& e) {
        std::cerr << "numeric non-convergence: " << e.what()
                  << " (best estimate " << e.best_estimate() << ", error bound " << e.error_bound()
                  << ")\n";
        return cli::kExitNonConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
