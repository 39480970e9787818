#include "fraclap/cli/config.hpp"
#include "fraclap/cli/csv.hpp"
#include "fraclap/cli/dispatch.hpp"
#include "fraclap/errors.hpp"
#include "fraclap/limitlab.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <unistd.h>

using namespace fraclap;
using namespace fraclap::cli;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("fraclap_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string error_of(std::string_view text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

bool contains(const std::string& haystack, std::string_view needle) {
    return haystack.find(needle) != std::string::npos;
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("empty config gives the defaults") {
    const RunConfig cfg = parse_config("");
    CHECK(cfg.x_left == -1.0);
    CHECK(cfg.x_right == 1.0);
    CHECK(cfg.n == 256);
    CHECK(cfg.mu == 0.1);
    CHECK(cfg.a == 1.0);
    CHECK(cfg.b == 2.0);
    CHECK(cfg.tol == 1e-10);
    CHECK_FALSE(cfg.s.has_value());
    CHECK(cfg.s_list == geometric_ladder(10));
    CHECK(parse_config("# only a comment\n\n   \n").n == 256);
}

TEST_CASE("config values") {
    const RunConfig cfg = parse_config("n = 128\ns = 0.5");
    CHECK(cfg.n == 128);
    REQUIRE(cfg.s.has_value());
    CHECK(*cfg.s == 0.5);

    const RunConfig full = parse_config(
        "x_left = 0   # comment\n"
        "x_right = 2\n"
        "s_list = 0.5, 0.75, 0.875\n"
        "rhs = hat\n"
        "step_rule = armijo\n"
        "seed = 42\n"
        "workers = 3\n"
        "max_iter = 10\n");
    CHECK(full.x_left == 0.0);
    CHECK(full.x_right == 2.0);
    CHECK(full.s_list == std::vector<double>{0.5, 0.75, 0.875});
    CHECK(full.rhs == RhsPreset::hat);
    CHECK(full.step_rule == StepRule::armijo);
    CHECK(full.seed == 42);
    CHECK(full.workers == 3);
    CHECK(full.control().max_iter == 10);
    CHECK(full.control().step_rule == StepRule::armijo);
}

TEST_CASE("config errors name the key and line") {
    const std::string swapped = error_of("a = 2\nb = 1");
    CHECK(contains(swapped, "line 2"));
    CHECK(contains(swapped, "a > b"));
    CHECK(contains(error_of("b = 0.5\na = 1"), "line 2"));

    const std::string unknown = error_of("n = 64\ncolour = red");
    CHECK(contains(unknown, "line 2"));
    CHECK(contains(unknown, "colour"));

    const std::string malformed = error_of("mu = 0.1x");
    CHECK(contains(malformed, "line 1"));
    CHECK(contains(malformed, "mu"));

    CHECK(contains(error_of("s = 1.0"), "'s'"));
    CHECK(contains(error_of("s = 0"), "'s'"));
    CHECK(contains(error_of("n = 2"), "'n'"));
    CHECK(contains(error_of("n = -5"), "'n'"));
    CHECK(contains(error_of("mu = 0"), "'mu'"));
    CHECK(contains(error_of("x_left = 1\nx_right = 0"), "line 2"));
    CHECK(contains(error_of("s_list = 0.9, 0.5"), "s_list"));
    CHECK(contains(error_of("n = 64\nn = 65"), "duplicate"));
    CHECK(contains(error_of("just words"), "line 1"));
}

TEST_CASE("command-line settings") {
    RunConfig cfg = parse_config("a = 1.5");
    apply_setting(cfg, "b", "3");
    CHECK(cfg.b == 3.0);
    try {
        apply_setting(cfg, "a", "4");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(contains(e.what(), "command line"));
    }
}

TEST_CASE("double formatting round-trips") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> mantissa(-1.0, 1.0);
    std::uniform_int_distribution<int> exponent(-300, 300);
    for (int i = 0; i < 1000; ++i) {
        const double x = std::ldexp(mantissa(rng), exponent(rng));
        CHECK(parse_double(format_double(x)) == x);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(std::isinf(parse_double(format_double(std::numeric_limits<double>::infinity()))));
    CHECK(std::isnan(parse_double(format_double(std::numeric_limits<double>::quiet_NaN()))));
    CHECK_THROWS_AS(parse_double("1.0e"), std::invalid_argument);
    CHECK_THROWS_AS(parse_double(""), std::invalid_argument);
}

TEST_CASE("csv round trip") {
    CsvTable table{{"x", "y"}, {}};
    table.add_row({format_double(0.1), format_double(-1e-300)});
    table.add_row({format_double(1.0 / 3.0), format_double(2.0)});
    const CsvTable back = parse_csv(to_csv(table));
    CHECK(back.header == table.header);
    CHECK(back.rows == table.rows);
    CHECK(back.column("y") == 1);
    CHECK_THROWS_AS(back.column("z"), std::out_of_range);
    CHECK(parse_double(back.rows[1][0]) == 1.0 / 3.0);
}

TEST_CASE("atomic write leaves only the final file") {
    TempDir dir;
    const fs::path target = dir.path() / "nested" / "out.csv";
    write_file_atomic(target, "a,b\n1,2\n");
    write_file_atomic(target, "a,b\n3,4\n");
    CHECK(read_file(target) == "a,b\n3,4\n");
    std::size_t entries = 0;
    for ([[maybe_unused]] const auto& entry : fs::directory_iterator(target.parent_path())) {
        ++entries;
    }
    CHECK(entries == 1);
}

TEST_CASE("subcommand names") {
    CHECK(parse_subcommand("sweep") == Subcommand::sweep);
    CHECK(parse_subcommand("gamma") == Subcommand::gamma);
    CHECK_THROWS_AS(parse_subcommand("plot"), ConfigError);
}

TEST_CASE("validate subcommand") {
    const Run r = run({"validate"});
    CHECK(r.code == kExitOk);
    CHECK(contains(r.out, "512"));
}

TEST_CASE("solve subcommand") {
    TempDir dir;
    const Run r = run({"solve", "--out", dir.path().string(), "--s", "0.5", "--n", "255"});
    REQUIRE(r.code == kExitOk);
    const CsvTable table = parse_csv(read_file(dir.path() / "solution.csv"));
    CHECK(table.header == std::vector<std::string>{"x", "u", "f"});
    REQUIRE(table.rows.size() == 255);
    const auto& middle = table.rows[127];
    CHECK(parse_double(middle[0]) == doctest::Approx(0.0));
    CHECK(parse_double(middle[1]) == doctest::Approx(1.0).epsilon(0.03));
    CHECK(parse_double(middle[2]) == 1.0);
}

TEST_CASE("control subcommand") {
    TempDir dir;
    const Run r = run({"control", "--out", dir.path().string(), "--n", "32"});
    REQUIRE(r.code == kExitOk);
    CHECK(contains(r.out, "J_star="));
    CHECK(contains(r.out, "pgd_converged="));
    const CsvTable table = parse_csv(read_file(dir.path() / "control.csv"));
    CHECK(table.header == std::vector<std::string>{"x", "f_star", "u_star"});
    CHECK(table.rows.size() == 32);
}

TEST_CASE("sweep subcommand") {
    TempDir dir;
    const Run r = run({"sweep", "--out", dir.path().string(), "--n", "64"});
    REQUIRE(r.code == kExitOk);
    const CsvTable table = parse_csv(read_file(dir.path() / "sweep.csv"));
    CHECK(table.header == std::vector<std::string>{"s", "J_star", "dist_f", "dist_u", "align", "lambda_max",
                                                   "seminorm_sq", "poincare_c"});
    REQUIRE(table.rows.size() == 10);
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        CHECK(parse_double(table.rows[i][0]) > parse_double(table.rows[i - 1][0]));
    }
}

TEST_CASE("sweep output is byte-identical across worker counts") {
    TempDir serial;
    TempDir parallel;
    REQUIRE(run({"sweep", "--out", serial.path().string(), "--n", "96", "--workers", "1"}).code == kExitOk);
    REQUIRE(run({"sweep", "--out", parallel.path().string(), "--n", "96", "--workers", "4"}).code == kExitOk);
    CHECK(read_file(serial.path() / "sweep.csv") == read_file(parallel.path() / "sweep.csv"));
}

TEST_CASE("gamma subcommand") {
    TempDir dir;
    const Run r = run({"gamma", "--out", dir.path().string(), "--n", "128"});
    REQUIRE(r.code == kExitOk);
    CHECK(contains(r.out, "recovery PASS"));
    CHECK(contains(r.out, "liminf PASS"));
    const CsvTable table = parse_csv(read_file(dir.path() / "gamma.csv"));
    CHECK(table.header == std::vector<std::string>{"clause", "index", "s", "F_s", "F", "margin"});
    CHECK(table.rows.size() == 20);
    CHECK(table.rows.front()[0] == "recovery");
    CHECK(table.rows.back()[0] == "liminf");
}

TEST_CASE("config file with command-line overrides") {
    TempDir dir;
    const fs::path config = dir.path() / "run.cfg";
    write_file_atomic(config, "n = 40\ns = 0.3\n");
    const Run r = run({"solve", "--config", config.string(), "--out", dir.path().string(), "--n", "20"});
    REQUIRE(r.code == kExitOk);
    CHECK(contains(r.out, "s=0.3"));
    CHECK(parse_csv(read_file(dir.path() / "solution.csv")).rows.size() == 20);
}

TEST_CASE("exit codes for bad input") {
    TempDir dir;
    const Run swapped = run({"solve", "--out", dir.path().string(), "--a", "3", "--b", "1"});
    CHECK(swapped.code == kExitConfig);
    CHECK(contains(swapped.err, "a > b"));
    CHECK_FALSE(fs::exists(dir.path() / "solution.csv"));

    CHECK(run({"plot"}).code == kExitConfig);
    CHECK(run({"solve", "--config", (dir.path() / "missing.cfg").string()}).code == kExitConfig);
    const fs::path bad = dir.path() / "bad.cfg";
    write_file_atomic(bad, "n = 64\nfoo = 1\n");
    const Run unknown = run({"solve", "--config", bad.string(), "--out", dir.path().string()});
    CHECK(unknown.code == kExitConfig);
    CHECK(contains(unknown.err, "line 2"));
}

TEST_CASE("same config and seed give identical control output") {
    TempDir first;
    TempDir second;
    REQUIRE(run({"control", "--out", first.path().string(), "--n", "24", "--seed", "7"}).code == kExitOk);
    REQUIRE(run({"control", "--out", second.path().string(), "--n", "24", "--seed", "7"}).code == kExitOk);
    CHECK(read_file(first.path() / "control.csv") == read_file(second.path() / "control.csv"));
}
