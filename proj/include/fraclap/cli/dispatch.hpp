#pragma once

#include "fraclap/cli/config.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace fraclap::cli {

enum class Subcommand { validate, solve, control, sweep, gamma };

/// Throws ConfigError for an unknown name.
Subcommand parse_subcommand(std::string_view name);

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,
    kExitNumerical = 2,
    kExitAcceptance = 3,
};

/// Runs one subcommand; outputs go to cfg.out.
int dispatch(const RunConfig& cfg, Subcommand command, std::ostream& out, std::ostream& err);

/// Full command line (without the program name): subcommand, --config,
/// --out and the per-key overrides.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fraclap::cli
