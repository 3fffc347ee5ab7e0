#pragma once

// Command-line front end: config file loading and subcommand dispatch.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "persist/engine.hpp"
#include "persist/experiments.hpp"
#include "persist/search.hpp"

namespace persist {

/// Everything a config file can set. Defaults are the baseline population.
struct CliConfig {
    SimConfig sim;
    SweepSpec sweep;
    double sensitivity_center = 0.5;
    int sensitivity_repetitions = 10;
    SearchSpec search;
    CalibrationTargets calibration;
    HazardSearchSpace hazard_space;

    CliConfig();
};

/// INI-style key/value file with [section] headers and ';' comments.
/// Unknown sections or keys are rejected so typos do not pass silently.
CliConfig parse_config(std::string_view text);
CliConfig load_config(const std::filesystem::path& path);

/// Runs one command line. Returns 0 on success, 1 on validation errors and
/// 2 on I/O errors. One `key=value` summary line goes to `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace persist
