#pragma once

#include "fraclap/control.hpp"
#include "fraclap/forward.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fraclap::cli {

/// Everything a run needs; defaults match an empty config file.
struct RunConfig {
    double x_left = -1.0;
    double x_right = 1.0;
    std::size_t n = 256;
    /// Single-order mode (solve, control, validate). Unset means 0.5.
    std::optional<double> s;
    /// Ladder for sweep and gamma; default 1 − 2^{−k}, k = 1..10.
    std::vector<double> s_list;
    double mu = 0.1;
    double a = 1.0;
    double b = 2.0;
    double tol = 1e-10;
    std::size_t max_iter = 20000;
    std::string scheme = "monotone";
    RhsPreset rhs = RhsPreset::one;
    StepRule step_rule = StepRule::fixed_lipschitz;
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    std::filesystem::path out = ".";

    RunConfig();

    double single_s() const { return s.value_or(0.5); }
    ControlConfig control() const;
};

/// Names accepted in config files.
const std::vector<std::string_view>& config_keys();

/// Parses "key = value" lines; '#' starts a comment, blank lines are ignored.
/// Unknown keys, malformed values and violated constraints throw ConfigError
/// naming the key and the 1-based line.
RunConfig parse_config(std::string_view text);

/// Sets one key as if it appeared on `line` (0 for the command line) and
/// re-validates the whole config.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value, std::size_t line = 0);

/// Cross-field checks (a ≤ b, ...). Throws ConfigError.
void validate(const RunConfig& cfg);

}  // namespace fraclap::cli
