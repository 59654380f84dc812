#pragma once

#include <iosfwd>
#include <string>

namespace dualcurve {

// Exit codes shared by the CLI and the embedded runner.
enum ExitCode { exit_ok = 0, exit_config = 2, exit_budget = 3, exit_internal = 4 };

// Runs one subcommand ("curve-info", "enumerate", "count", "sum", "cover",
// "dimscan") against a config file. Human-readable progress goes to `report`;
// data files are written to the configured output path. Returns an ExitCode.
int run_command(const std::string& command, const std::string& config_path,
                std::ostream& report, std::ostream& errors);

} // namespace dualcurve
