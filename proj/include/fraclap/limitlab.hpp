#pragma once

#include "fraclap/control.hpp"
#include "fraclap/grid.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace fraclap {

/// s_k = 1 − 2^{−k} for k = 1..k_max.
std::vector<double> geometric_ladder(std::size_t k_max);

/// Throws ConfigError unless the list is nonempty, strictly ascending and inside (0,1).
void validate_ladder(const std::vector<double>& s_list);

struct SweepConfig {
    Grid grid;
    std::vector<double> s_list;
    ControlConfig control;
    std::size_t workers = 1;
    /// Also run pgd_solve at every s and record its cost.
    bool pgd_cross_check = false;
};

/// One rung of the ladder, compared with the classical (s = 1) optimum.
struct SweepRow {
    double s = 0.0;
    double J_star = 0.0;
    /// ‖f*_s − f*₁‖_h with both controls sign-normalized.
    double dist_f = 0.0;
    double dist_u = 0.0;
    /// |⟨f*_s, f*₁⟩_h| / (‖f*_s‖_h ‖f*₁‖_h).
    double align = 0.0;
    double lambda_max = 0.0;
    /// ⟨f*_s, u*_s⟩_h.
    double seminorm_sq = 0.0;
    double poincare_c = 0.0;
    /// Cost reached by the projected-gradient cross-check (NaN when not run).
    double J_pgd = 0.0;
    /// Set when this rung failed; the numeric fields are then NaN.
    std::optional<std::string> error;
};

struct SweepReport {
    OptimResult reference;
    double reference_poincare_c = 0.0;
    /// Sorted ascending in s.
    std::vector<SweepRow> rows;
};

/// Solves the control problem at every s (in parallel over `workers` threads)
/// and at s = 1. A failure of the classical reference throws; failures at a
/// single s are recorded in that row.
SweepReport run_sweep(const SweepConfig& cfg);

struct StateConvergenceRow {
    double s = 0.0;
    double dist_u = 0.0;
    /// dist_u / ‖u₁‖_h, 0 when u₁ = 0.
    double relative_dist_u = 0.0;
    double seminorm_sq = 0.0;
    /// |seminorm_sq(s) − seminorm_sq(classical)|.
    double seminorm_gap = 0.0;
};

struct StateConvergenceReport {
    ForwardSolution reference;
    std::vector<StateConvergenceRow> rows;
};

/// Fixed right-hand side f: distances of u_s to the classical state u₁ and of
/// the energies ⟨f, u_s⟩_h to ⟨f, u₁⟩_h.
StateConvergenceReport state_convergence_check(const Grid& grid, const GridFunction& f,
                                               const std::vector<double>& s_list);

struct BbmRow {
    double s = 0.0;
    double value = 0.0;
    double gap = 0.0;
};

struct BbmReport {
    /// ⟨A₁ v, v⟩_h, the discrete Dirichlet energy.
    double classical_energy = 0.0;
    std::vector<BbmRow> rows;
};

/// ⟨A_s v, v⟩_h along the ladder for a fixed v.
BbmReport bbm_limit_check(const Grid& grid, const GridFunction& v, const std::vector<double>& s_list);

/// Cost extended by +∞ outside the admissible annulus.
double extended_cost(const PoissonSolver& solver, const GridFunction& f, const ControlConfig& cfg);

struct RecoveryRow {
    double s = 0.0;
    double F_s = 0.0;
    double F = 0.0;
    /// |F_s − F|; 0 when both are infinite.
    double gap = 0.0;
};

struct LiminfRow {
    std::size_t k = 0;
    double s = 0.0;
    double F_k = 0.0;
    double F = 0.0;
    /// F_k(f_k) − F(f), signed.
    double margin = 0.0;
};

struct GammaTolerances {
    /// Bound on |F_s(f) − F(f)| / F(f) at the last rung.
    double recovery_relative = 0.02;
    /// Lower bound −tol on the liminf margins over the tail of the ladder.
    double liminf_margin = 1e-3;
};

struct GammaCheckReport {
    std::vector<RecoveryRow> recovery_rows;
    std::vector<LiminfRow> liminf_rows;
    std::optional<bool> recovery_passed;
    std::optional<bool> liminf_passed;
};

/// Constant sequence f_k = f: F_s(f) along the ladder against F(f).
/// Passes when the last three gaps do not increase and the last relative gap
/// is within tolerance.
GammaCheckReport recovery_sequence_check(const Grid& grid, const GridFunction& f,
                                         const std::vector<double>& s_list, const ControlConfig& cfg,
                                         const GammaTolerances& tolerances = {});

/// Weakly null perturbations f_k = f + c sin(kπ(x − x_c)/r) paired with s_k.
/// Passes when the signed margins over the last third of the ladder are
/// ≥ −tolerance. Throws ConfigError if some f_k leaves U_ad.
GammaCheckReport liminf_check(const Grid& grid, const GridFunction& f, double amplitude,
                              const std::vector<double>& s_list, const ControlConfig& cfg,
                              const GammaTolerances& tolerances = {});

}  // namespace fraclap
