#pragma once

#include <cstddef>
#include <vector>

#include "stablelab/problem.hpp"
#include "stablelab/spectral_grid.hpp"

namespace stablelab {

enum class ConstantForm {
    /// u_t + L u - lam u = f.
    plain,
    /// u_t + c L u - lam (1 + c) u = f.
    sigma,
};

/// Exact Fourier-multiplier solve of a constant-coefficient equation.
///
/// plain: F u = F f / (-i tau - |omega|^alpha / 2 - lam)
/// sigma: F u = F f / (-i tau - c |omega|^alpha / 2 - lam (1 + c))
/// (c is ignored for the plain form).
GridFn2 solve_constant(const GridFn2& f, double lam, double c, double alpha,
                       ConstantForm form = ConstantForm::sigma);

/// One stage of the continuity path. Step 1 moves the diffusion from the
/// identity to |b|^alpha through sigma(s) = 1 - s + s |b|^alpha; step 2 turns
/// on the drift s * a u_x.
struct HomotopyStage {
    int step = 1;
    double s = 0.0;
    std::size_t iterations = 0;
    double residual = 0.0;
};

struct SolveResult {
    GridFn2 u;
    /// Grid L2 norm of u_t + |b|^alpha L u + a u_x - lam (1 + |b|^alpha) u + f.
    double residual_l2 = 0.0;
    std::size_t iterations = 0;
    std::vector<HomotopyStage> homotopy_path;
    std::vector<double> residual_history;
};

struct SolverOptions {
    /// Convergence: residual_l2 <= tol * ||f||.
    double tol = 1e-8;
    std::size_t max_iter = 400;
    /// Tolerance for the intermediate homotopy stages (never below tol).
    double stage_tol = 1e-3;
    /// Continuity parameters visited in each step.
    std::vector<double> schedule{0.0, 0.25, 0.5, 0.75, 1.0};
    /// Reject lam below max(delta, lambda0/2 + margin).
    bool enforce_thresholds = true;
    double threshold_margin = 1e-9;
};

/// Solves the variable-coefficient equation
///
///   u_t + |b|^alpha L u + a u_x - lam (1 + |b|^alpha) u + f = 0
///
/// by the two-step continuity path, each stage a Richardson iteration
/// preconditioned by the exact constant-coefficient inverse with the frozen
/// constant c* = midpoint of the certified range of the diffusion factor.
///
/// Throws PreconditionError when lam is below the validity threshold and
/// DivergenceError (with the residual history) when max_iter is exhausted.
SolveResult solve_variable(const ProblemSpec& spec, const GridFn2& f,
                           const SolverOptions& options = {});

}  // namespace stablelab
