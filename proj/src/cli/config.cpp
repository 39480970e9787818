#include "fraclap/cli/config.hpp"

#include "fraclap/errors.hpp"
#include "fraclap/limitlab.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace fraclap::cli {

namespace {

using LineMap = std::map<std::string, std::size_t, std::less<>>;

std::string where(std::string_view key, std::size_t line) {
    std::string loc = line == 0 ? std::string("command line") : "line " + std::to_string(line);
    return loc + ", key '" + std::string(key) + "': ";
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(std::string_view key, std::string_view text, std::size_t line) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw ConfigError(where(key, line) + "malformed number '" + std::string(text) + "'");
    }
    return value;
}

std::uint64_t to_unsigned(std::string_view key, std::string_view text, std::size_t line) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError(where(key, line) + "malformed integer '" + std::string(text) + "'");
    }
    return value;
}

void require(bool ok, std::string_view key, std::size_t line, std::string_view message) {
    if (!ok) {
        throw ConfigError(where(key, line) + std::string(message));
    }
}

bool in_open_unit(double s) { return s > 0.0 && s < 1.0; }

void set_value(RunConfig& cfg, std::string_view key, std::string_view value, std::size_t line) {
    if (key == "x_left") {
        cfg.x_left = to_double(key, value, line);
    } else if (key == "x_right") {
        cfg.x_right = to_double(key, value, line);
    } else if (key == "n") {
        const auto n = to_unsigned(key, value, line);
        require(n >= 3, key, line, "n < 3");
        cfg.n = static_cast<std::size_t>(n);
    } else if (key == "s") {
        const double s = to_double(key, value, line);
        require(in_open_unit(s), key, line, "s outside (0,1)");
        cfg.s = s;
    } else if (key == "s_list") {
        std::vector<double> list;
        std::string items(value);
        std::replace(items.begin(), items.end(), ',', ' ');
        std::istringstream in(items);
        std::string token;
        while (in >> token) {
            const double s = to_double(key, token, line);
            require(in_open_unit(s), key, line, "s outside (0,1)");
            list.push_back(s);
        }
        require(!list.empty(), key, line, "empty list");
        require(std::is_sorted(list.begin(), list.end()) &&
                    std::adjacent_find(list.begin(), list.end()) == list.end(),
                key, line, "s_list must be strictly ascending");
        cfg.s_list = std::move(list);
    } else if (key == "mu") {
        cfg.mu = to_double(key, value, line);
        require(cfg.mu > 0.0, key, line, "mu must be positive");
    } else if (key == "a") {
        cfg.a = to_double(key, value, line);
        require(cfg.a >= 0.0, key, line, "a must be nonnegative");
    } else if (key == "b") {
        cfg.b = to_double(key, value, line);
        require(cfg.b >= 0.0, key, line, "b must be nonnegative");
    } else if (key == "tol") {
        cfg.tol = to_double(key, value, line);
        require(cfg.tol > 0.0, key, line, "tol must be positive");
    } else if (key == "max_iter") {
        const auto m = to_unsigned(key, value, line);
        require(m > 0, key, line, "max_iter must be positive");
        cfg.max_iter = static_cast<std::size_t>(m);
    } else if (key == "scheme") {
        require(value == "monotone", key, line, "unknown scheme '" + std::string(value) + "' (expected monotone)");
        cfg.scheme = std::string(value);
    } else if (key == "rhs") {
        try {
            cfg.rhs = parse_rhs_preset(value);
        } catch (const ConfigError& e) {
            throw ConfigError(where(key, line) + e.what());
        }
    } else if (key == "step_rule") {
        try {
            cfg.step_rule = parse_step_rule(value);
        } catch (const ConfigError& e) {
            throw ConfigError(where(key, line) + e.what());
        }
    } else if (key == "seed") {
        cfg.seed = to_unsigned(key, value, line);
    } else if (key == "workers") {
        const auto w = to_unsigned(key, value, line);
        require(w >= 1, key, line, "workers must be >= 1");
        cfg.workers = static_cast<std::size_t>(w);
    } else if (key == "out") {
        require(!value.empty(), key, line, "empty path");
        cfg.out = std::filesystem::path(std::string(value));
    } else {
        throw ConfigError(where(key, line) + "unknown key");
    }
}

std::optional<std::size_t> line_of(const LineMap& lines, std::string_view key) {
    const auto it = lines.find(key);
    if (it == lines.end()) {
        return std::nullopt;
    }
    return it->second;
}

// Reports a cross-field violation at whichever of the two keys was set last.
void cross_check(bool ok, const LineMap& lines, std::string_view first, std::string_view second,
                 std::string_view message) {
    if (ok) {
        return;
    }
    const auto l1 = line_of(lines, first);
    const auto l2 = line_of(lines, second);
    if (l1 && (!l2 || *l1 > *l2)) {
        throw ConfigError(where(first, *l1) + std::string(message));
    }
    throw ConfigError(where(second, l2.value_or(0)) + std::string(message));
}

void validate_lines(const RunConfig& cfg, const LineMap& lines) {
    cross_check(cfg.a <= cfg.b, lines, "a", "b", "a > b");
    cross_check(cfg.x_left < cfg.x_right, lines, "x_left", "x_right", "x_left >= x_right");
}

}  // namespace

RunConfig::RunConfig() : s_list(geometric_ladder(10)) {}

ControlConfig RunConfig::control() const {
    ControlConfig c;
    c.mu = mu;
    c.a = a;
    c.b = b;
    c.tol = tol;
    c.max_iter = max_iter;
    c.step_rule = step_rule;
    return c;
}

const std::vector<std::string_view>& config_keys() {
    static const std::vector<std::string_view> keys = {
        "x_left", "x_right", "n",      "s",    "s_list", "mu",   "a",       "b",
        "tol",    "max_iter", "scheme", "rhs", "step_rule", "seed", "workers", "out"};
    return keys;
}

RunConfig parse_config(std::string_view text) {
    RunConfig cfg;
    LineMap lines;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (lines.count(key) != 0) {
            throw ConfigError(where(key, line_no) + "duplicate key (first set on line " +
                              std::to_string(lines.find(key)->second) + ")");
        }
        set_value(cfg, key, value, line_no);
        lines.emplace(std::string(key), line_no);
    }
    validate_lines(cfg, lines);
    return cfg;
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value, std::size_t line) {
    set_value(cfg, key, trim(value), line);
    LineMap lines;
    lines.emplace(std::string(key), line);
    validate_lines(cfg, lines);
}

void validate(const RunConfig& cfg) {
    validate_lines(cfg, {});
    require(cfg.n >= 3, "n", 0, "n < 3");
    if (cfg.s) {
        require(in_open_unit(*cfg.s), "s", 0, "s outside (0,1)");
    }
    try {
        validate_ladder(cfg.s_list);
        cfg.control().validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
}

}  // namespace fraclap::cli
