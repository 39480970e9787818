// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "fraclap/cli/dispatch.hpp"
#include "fraclap/control.hpp"
#include "fraclap/discretize.hpp"
#include "fraclap/forward.hpp"
#include "fraclap/limitlab.hpp"
#include "fraclap/linalg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

using namespace fraclap;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool passed = false;
    std::string detail;
};

class Detail {
public:
    template <typename T>
    Detail& operator()(std::string_view key, const T& value) {
        if (!first_) {
            text_ << ", ";
        }
        first_ = false;
        text_ << key << '=' << value;
        return *this;
    }
    std::string str() const { return text_.str(); }

private:
    std::ostringstream text_ = [] {
        std::ostringstream s;
        s << std::setprecision(4);
        return s;
    }();
    bool first_ = true;
};

GridFunction random_function(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> dist;
    GridFunction v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = dist(rng);
    }
    return v;
}

GridFunction constant_with_norm(const Grid& grid, double target) {
    const GridFunction ones(grid.size(), 1.0);
    return (target / norm_h(ones, grid)) * ones;
}

bool strictly_decreasing(const std::vector<double>& v) {
    return std::adjacent_find(v.begin(), v.end(), std::less_equal<>{}) == v.end();
}

// Closed-form solution of (−Δ)^s u = 1 on (−1, 1), evaluated independently of the library.
GridFunction exact_ball(const Grid& grid, double s) {
    const double k = std::pow(2.0, -2.0 * s) * std::sqrt(std::numbers::pi) / (std::tgamma(0.5 + s) * std::tgamma(1.0 + s));
    return sample(grid, [&](double x) { return k * std::pow(1.0 - x * x, s); });
}

Verdict forward_validation() {
    const double s = 0.5;
    std::vector<double> errors;
    for (std::size_t n : {64u, 128u, 256u, 512u}) {
        const Grid grid(-1.0, 1.0, n);
        const ForwardSolution sol = solve_poisson(assemble_fractional(grid, s), GridFunction(n, 1.0));
        const GridFunction exact = exact_ball(grid, s);
        errors.push_back(norm_h(sol.u - exact, grid) / norm_h(exact, grid));
    }
    Detail d;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        d("err(" + std::to_string(64u << i) + ")", errors[i]);
    }
    return {errors.back() <= 0.03 && strictly_decreasing(errors), d.str()};
}

Verdict classical_limit() {
    const std::size_t n = 256;
    const Grid grid(-1.0, 1.0, n);
    const double h2 = grid.h() * grid.h();
    const StencilWeights w = stencil_weights(0.999, grid.h(), n);
    const double w1 = w.at(1) * h2;
    double far = 0.0;
    for (std::size_t k = 2; k <= w.count(); ++k) {
        far = std::max(far, w.at(k) * h2);
    }

    const GridFunction ones(n, 1.0);
    const GridFunction u1 = solve_poisson(assemble_classical(grid), ones).u;
    const GridFunction us = solve_poisson(assemble_fractional(grid, 0.9999), ones).u;
    const double dist = norm_h(us - u1, grid) / norm_h(u1, grid);

    Detail d;
    d("|w1 h^2 - 1|", std::abs(w1 - 1.0))("max_k>=2 w_k h^2", far)("rel dist u(0.9999)", dist);
    return {std::abs(w1 - 1.0) <= 0.02 && far <= 0.01 && dist <= 0.01, d.str()};
}

Verdict bbm_limit() {
    const Grid grid(-1.0, 1.0, 1024);
    const GridFunction v = sample(grid, [](double x) { return 1.0 - x * x; });
    const double target = 8.0 / 3.0;
    const BbmReport report = bbm_limit_check(grid, v, {0.9, 0.99, 0.999});
    std::vector<double> gaps;
    Detail d;
    for (const auto& row : report.rows) {
        gaps.push_back(std::abs(row.value - target));
        d("E(" + std::to_string(row.s).substr(0, 5) + ")", row.value);
    }
    d("target", target);
    return {gaps.back() <= 0.03 * target && strictly_decreasing(gaps), d.str()};
}

Verdict control_ladder() {
    SweepConfig cfg{Grid(-1.0, 1.0, 256), geometric_ladder(10), ControlConfig{}};
    const SweepReport ladder = run_sweep(cfg);
    cfg.s_list = {0.99};
    const SweepReport at_099 = run_sweep(cfg);
    const double j1 = ladder.reference.J_star;

    bool ok = true;
    std::vector<double> j_gaps;
    std::vector<double> dist_u;
    double min_align = 1.0;
    for (const SweepRow& row : ladder.rows) {
        ok = ok && !row.error;
        j_gaps.push_back(std::abs(row.J_star - j1));
        dist_u.push_back(row.dist_u);
        if (row.s >= 0.99) {
            min_align = std::min(min_align, row.align);
        }
    }
    const SweepRow& row_099 = at_099.rows.front();
    ok = ok && !row_099.error;
    min_align = std::min(min_align, row_099.align);
    const double rel_099 = std::abs(row_099.J_star - j1) / j1;
    const std::vector<double> tail(j_gaps.end() - 3, j_gaps.end());

    Detail d;
    d("|J-J1| rung 8", tail[0])("rung 9", tail[1])("rung 10", tail[2])("rel gap(0.99)", rel_099)("min align s>=0.99", min_align)(
        "dist_u first", dist_u.front())("dist_u last", dist_u.back());
    ok = ok && strictly_decreasing(tail) && rel_099 <= 0.02 && min_align >= 0.999 && strictly_decreasing(dist_u);
    return {ok, d.str()};
}

Verdict optimizer_cross_validation() {
    const Grid grid(-1.0, 1.0, 128);
    const ControlConfig cfg;
    const PoissonSolver solver(assemble_fractional(grid, 0.5));
    const OptimResult eig = eigen_solve_control(solver, cfg);

    std::mt19937_64 rng(2024);
    const OptimResult pgd = pgd_solve(solver, cfg, random_function(grid.size(), rng));
    const OptimalityCheck check = compare_with_global(pgd, eig);
    const bool pgd_ok = check.agrees || (check.flagged_suboptimal && pgd.J_star >= eig.J_star);

    const auto spectrum = eig_full_jacobi(solver.op());
    const double lambda = spectrum.back().value;
    const double j_jacobi = cfg.a * cfg.a / (2.0 * lambda) + cfg.mu * cfg.a * cfg.a / 2.0;
    const double jacobi_gap = std::abs(eig.J_star - j_jacobi) / j_jacobi;

    Detail d;
    d("pgd gap", check.relative_gap)("pgd iters", pgd.iters)("pgd converged", pgd.converged)(
        "report", check.agrees ? "agrees" : "flagged stationary point, J_pgd >= J_eig")("|J_eig-J_jacobi|/J",
                                                                                        jacobi_gap);
    return {pgd_ok && jacobi_gap <= 1e-10, d.str()};
}

Verdict gradient_check() {
    std::mt19937_64 rng(606);
    const Grid grid(-1.0, 1.0, 128);
    const double mu = 0.1;
    double worst = 0.0;
    for (double s : {0.3, 0.5, 0.8}) {
        const PoissonSolver solver(assemble_fractional(grid, s));
        const GridFunction f = random_function(grid.size(), rng);
        const GridFunction g = reduced_gradient(solver, f, mu);
        for (int i = 0; i < 10; ++i) {
            const GridFunction dir = random_function(grid.size(), rng);
            const double eps = 1e-4;
            const double fd =
                (reduced_cost(solver, f + eps * dir, mu) - reduced_cost(solver, f - eps * dir, mu)) / (2.0 * eps);
            const double exact = inner_product_h(g, dir, grid);
            worst = std::max(worst, std::abs(fd - exact) / std::abs(exact));
        }
    }
    return {worst <= 1e-6, (Detail{})("worst relative error", worst).str()};
}

Verdict structural_properties() {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> size(3, 48);
    std::size_t failures = 0;
    const std::size_t cases = 1000;

    for (std::size_t c = 0; c < cases; ++c) {
        const double s = 0.01 + 0.98 * unit(rng);
        const double left = -2.0 + 2.0 * unit(rng);
        const Grid grid(left, left + 0.5 + 3.0 * unit(rng), size(rng));
        const std::size_t n = grid.size();
        const Operator op = assemble_fractional(grid, s);
        const DenseMatrix& m = op.matrix;

        bool ok = m.is_symmetric();
        for (std::size_t i = 0; i < n && ok; ++i) {
            ok = m(i, i) > 0.0;
            for (std::size_t j = 0; j < n && ok; ++j) {
                ok = i == j || m(i, j) < 0.0;
            }
        }
        const auto factor = CholeskyFactor::try_factor(m);
        ok = ok && factor.has_value();
        if (ok) {
            GridFunction f(n);
            for (std::size_t i = 0; i < n; ++i) {
                f[i] = unit(rng);
            }
            ok = maximum_principle_check(op, f) == MaximumPrinciple::holds;

            const GridFunction g = random_function(n, rng);
            const double alpha = 4.0 * unit(rng) - 2.0;
            GridFunction combined = f + alpha * g;
            factor->solve_in_place(combined.span());
            GridFunction uf = f;
            GridFunction ug = g;
            factor->solve_in_place(uf.span());
            factor->solve_in_place(ug.span());
            const GridFunction expected = uf + alpha * ug;
            ok = ok && norm_h(combined - expected, grid) <= 1e-10 * (norm_h(expected, grid) + 1e-300);

            const double a = 2.0 * unit(rng);
            const double b = a + 2.0 * unit(rng);
            const GridFunction p = project_annulus(3.0 * g, grid, a, b).f;
            const double norm = norm_h(p, grid);
            const double raw = norm_h(3.0 * g, grid);
            ok = ok && norm >= a * (1.0 - 1e-12) && norm <= b * (1.0 + 1e-12);
            ok = ok && std::abs(norm - std::clamp(raw, a, b)) <= 1e-12 * std::max(1.0, raw);
            const GridFunction pp = project_annulus(p, grid, a, b).f;
            ok = ok && norm_h(pp - p, grid) <= 1e-14 * std::max(1.0, norm);
        }
        failures += ok ? 0 : 1;
    }

    const Grid grid(-1.0, 1.0, 96);
    const Operator op = assemble_fractional(grid, 0.5);
    const double c = poincare_constant(op);
    double min_slack = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i) {
        const GridFunction u = random_function(grid.size(), rng);
        const double bound = c * quadratic_form(op, u);
        min_slack = std::min(min_slack, (bound - inner_product_h(u, u, grid)) / bound);
    }
    // relative rounding of the two quadratic forms
    const bool poincare_ok = min_slack >= -1e-12;

    Detail d;
    d("cases", cases)("failing cases", failures)("min Poincare slack", min_slack);
    return {failures == 0 && poincare_ok, d.str()};
}

Verdict gamma_clauses() {
    const Grid grid(-1.0, 1.0, 256);
    const ControlConfig cfg;
    const GridFunction f = constant_with_norm(grid, 0.5 * (cfg.a + cfg.b));

    const GammaCheckReport recovery = recovery_sequence_check(grid, f, {0.9, 0.95, 0.99}, cfg);
    const RecoveryRow& last = recovery.recovery_rows.back();
    const double rel = last.gap / last.F;

    const std::vector<double> ladder = geometric_ladder(12);
    const GammaCheckReport liminf = liminf_check(grid, f, 0.1 * norm_h(f, grid), ladder, cfg);
    double min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 2 * ladder.size() / 3; i < ladder.size(); ++i) {
        min_margin = std::min(min_margin, liminf.liminf_rows[i].margin);
    }

    Detail d;
    d("recovery rel gap(0.99)", rel)("min tail liminf margin", min_margin);
    return {rel <= 0.02 && min_margin >= -1e-3, d.str()};
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

Verdict sweep_determinism() {
    const fs::path root = fs::temp_directory_path() / ("fraclap_acceptance_" + std::to_string(::getpid()));
    std::vector<std::string> outputs;
    bool ran = true;
    for (const char* workers : {"1", "1", "4", "3"}) {
        const fs::path dir = root / std::to_string(outputs.size());
        std::ostringstream sink;
        ran = ran && cli::run_cli({"sweep", "--out", dir.string(), "--workers", workers}, sink, sink) == cli::kExitOk;
        outputs.push_back(read_file(dir / "sweep.csv"));
    }
    std::error_code ec;
    fs::remove_all(root, ec);
    const bool identical = std::all_of(outputs.begin(), outputs.end(),
                                       [&](const std::string& o) { return !o.empty() && o == outputs.front(); });
    Detail d;
    d("runs", outputs.size())("workers", "1,1,4,3")("bytes", outputs.front().size());
    return {ran && identical, d.str()};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
        {"1 forward validation against the closed form", forward_validation},
        {"2 classical-limit stencil and state consistency", classical_limit},
        {"3 fractional energy tends to the Dirichlet energy", bbm_limit},
        {"4 optimal controls along the s ladder", control_ladder},
        {"5 projected gradient vs eigen solver vs Jacobi", optimizer_cross_validation},
        {"6 reduced gradient vs finite differences", gradient_check},
        {"7 structural properties, randomized", structural_properties},
        {"8 recovery and liminf clauses", gamma_clauses},
        {"9 sweep.csv byte-identical across runs and workers", sweep_determinism},
    };

    int failed = 0;
    for (const auto& [name, check] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        std::cout << (v.passed ? "[PASS] " : "[FAIL] ") << name << " (" << std::fixed << std::setprecision(1)
                  << elapsed.count() << " s): " << std::defaultfloat << v.detail << std::endl;
        failed += v.passed ? 0 : 1;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
    return failed == 0 ? 0 : 1;
}
