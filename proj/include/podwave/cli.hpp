#ifndef PODWAVE_CLI_HPP
#define PODWAVE_CLI_HPP
//
// podwave <command> [--config FILE] [--key value ...]
//
// Settings are applied in the order: built-in defaults, PODWAVE_OUTPUT_DIR,
// config file, command-line options. Exit codes: 0 success, 1 configuration
// error, 2 numerical failure (including a failed `check`).
//

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "podwave/experiments.hpp"

namespace podwave {

enum ExitCode : int { exit_ok = 0, exit_config = 1, exit_numerical = 2 };

struct CommandInfo {
    const char* name;
    const char* help;
};

inline const std::vector<CommandInfo>& commands()
{
    static const std::vector<CommandInfo> list{
        {"solve", "FE solve: trajectory.csv and energy.csv"},
        {"singvals", "POD singular values: singvals_<method>.csv"},
        {"error-formulas", "actual data errors vs. tail formulas: error_formulas.csv"},
        {"rom-sweep", "ROM errors and bound ratios over a damping sweep: rom_sweep_<D|G>.csv"},
        {"profiles", "FE and ROM spatial profiles: profiles.csv"},
        {"train-interval", "final-time ROM errors for shorter training intervals: train_interval.csv"},
        {"convergence", "time convergence against the series solution: convergence.csv"},
        {"check", "invariant suite: check.csv (exit 2 on any failure)"},
    };
    return list;
}

// runs one command and writes its tables; returns the exit code
inline int run_command(const std::string& command, const RunConfig& cfg, std::ostream& out)
{
    const std::filesystem::path dir = cfg.output_dir;
    std::vector<ResultTable> tables;
    int code = exit_ok;
    if (command == "solve")
        tables = run_solve(cfg);
    else if (command == "singvals")
        tables = run_singular_values(cfg);
    else if (command == "error-formulas")
        tables.push_back(run_error_formulas(cfg));
    else if (command == "rom-sweep")
        tables.push_back(run_rom_sweep(cfg));
    else if (command == "profiles")
        tables.push_back(run_profiles(cfg));
    else if (command == "train-interval")
        tables.push_back(run_train_interval(cfg));
    else if (command == "convergence")
        tables.push_back(run_convergence(cfg));
    else if (command == "check") {
        std::vector<CheckResult> results;
        tables.push_back(run_check(cfg, &results));
        for (const auto& r : results) {
            out << (r.pass ? "PASS " : "FAIL ") << r.name << " " << format_real(r.value) << " (tol "
                << format_real(r.tolerance) << ")\n";
            if (!r.pass)
                code = exit_numerical;
        }
    }
    else
        throw ConfigError("unknown command '" + command + "'");

    for (const auto& t : tables)
        out << "wrote " << write_table(dir, t, command, cfg).string() << "\n";
    return code;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"podwave: POD reduced-order models of the damped wave equation"};
    app.require_subcommand(1, 1);

    std::string config_path;
    app.add_option("--config", config_path, "key = value configuration file");

    std::map<std::string, std::string> overrides;
    std::map<std::string, CLI::Option*> options;
    for (const auto& key : RunConfig::keys())
        options[key] = app.add_option("--" + key, overrides[key], "override '" + key + "'");

    for (const auto& c : commands())
        app.add_subcommand(c.name, c.help)->fallthrough();

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? exit_ok : exit_config;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    RunConfig cfg;
    try {
        if (const char* env = std::getenv("PODWAVE_OUTPUT_DIR"); env && *env)
            cfg.output_dir = env;
        if (!config_path.empty())
            apply_config_file(cfg, config_path);
        for (const auto& key : RunConfig::keys())
            if (options[key]->count() > 0)
                cfg.set(key, overrides[key]);
        cfg.validate();
    }
    catch (const ConfigError& e) {
        err << "podwave: configuration error: " << e.what() << "\n";
        return exit_config;
    }

    try {
        return run_command(command, cfg, out);
    }
    catch (const ConfigError& e) {
        err << "podwave: configuration error: " << e.what() << "\n";
        return exit_config;
    }
    catch (const std::invalid_argument& e) {
        err << "podwave: invalid input: " << e.what() << "\n";
        return exit_config;
    }
    catch (const NumericalError& e) {
        err << "podwave: numerical failure: " << e.what() << "\n";
        return exit_numerical;
    }
    catch (const std::exception& e) {
        err << "podwave: error: " << e.what() << "\n";
        return exit_numerical;
    }
}

}  // namespace podwave

#endif  // PODWAVE_CLI_HPP
