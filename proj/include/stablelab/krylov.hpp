#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "stablelab/pde_solver.hpp"
#include "stablelab/problem.hpp"
#include "stablelab/report.hpp"
#include "stablelab/sde_engine.hpp"
#include "stablelab/spectral_grid.hpp"

namespace stablelab {

using SourceFn = std::function<double(double, double)>;

/// Nonnegative compactly supported source
///
///   scale * p((t - t0) / width_t) p((x - x0) / width_x) (1 + ripple cos(ripple_freq x))
///
/// with p(s) = exp(-1 / (1 - 4 s^2)) on |s| < 1/2, so the support is the
/// rectangle of side lengths width_t, width_x around (t0, x0).
struct BumpSource {
    double t0 = 0.0;
    double x0 = 0.0;
    double width_t = 1.0;
    double width_x = 1.0;
    double ripple = 0.0;
    double ripple_freq = 0.0;
    double scale = 1.0;

    double operator()(double t, double x) const;
};

/// Six bumps supported in t in [0.5, 8.5], each scaled to unit grid L2 norm.
std::vector<BumpSource> krylov_f_battery(const Grid2& grid);

/// Off-grid evaluation of a grid source (cubic, zero outside the box).
SourceFn grid_source(const GridFn2& f);

/// Left-endpoint sums along one path:
///   undiscounted  sum_k f(t_k, X_k) dt
///   discounted    sum_k exp(-lam phi_k) f(t_k, X_k) dt
///   stopped       sum over t_k < min(t_stop, tau_m) of f(t_k, X_k) dt
struct OccupationIntegrals {
    double undiscounted = 0.0;
    double discounted = 0.0;
    double stopped = 0.0;
};

OccupationIntegrals occupation_integrals(const StablePath& path, const SourceFn& f, double lam,
                                         double t_stop, double m);

/// result[s][i]: integrals of sources[s] along path i (stream (seed, i)).
std::vector<std::vector<OccupationIntegrals>> occupation_battery(
    const ProblemSpec& spec, const std::vector<SourceFn>& sources, double x0, double horizon, double dt,
    std::size_t n_paths, std::uint64_t master_seed, double t_stop, double m);

struct KrylovOptions {
    /// Calibrated constant; pass requires lhs <= m_cal * ||f||.
    double m_cal = std::numeric_limits<double>::infinity();
    /// Exact source; when empty, f is interpolated from the grid.
    SourceFn exact;
};

/// Monte Carlo E int_0^horizon [exp(-lam phi_s)] f(s, X_s) ds from X_0 = x0.
///
/// Throws ContractError if f is negative on the grid and RegimeError if f
/// is not negligible at the box boundary, if f carries mass beyond the
/// horizon, or (discounted) if exp(-lam (1 + mu^alpha) horizon) >= 1e-6.
EstimateReport krylov_functional(const ProblemSpec& spec, const GridFn2& f, double x0, double horizon,
                                 double dt, std::size_t n_paths, double lam, bool discounted,
                                 std::uint64_t master_seed, const KrylovOptions& options = {});

/// The regime checks of krylov_functional.
void check_krylov_regime(const ProblemSpec& spec, const GridFn2& f, double horizon, double lam, bool discounted);

/// Monte Carlo E int_0^{t ^ tau_m} f(s, X_s) ds against the L2 norm of f on
/// [0, t] x [-m, m] (grid quadrature).
EstimateReport local_krylov(const ProblemSpec& spec, const GridFn2& f, double x0, double t, double m,
                            double dt, std::size_t n_paths, std::uint64_t master_seed,
                            const KrylovOptions& options = {});

/// L2 norm of f over grid points with t in [0, t] and |x| <= m.
double windowed_l2(const GridFn2& f, double t, double m);

struct FeynmanKacOptions {
    SolverOptions solver{.tol = 1e-8};
    /// Re-solve on the coarsened grid and add the change to the allowance.
    bool grid_allowance = true;
    double max_exit_fraction = 1e-3;
    double se_multiplier = 3.0;
};

struct FeynmanKacResult {
    /// Reports at dt and dt/2 (common random numbers).
    EstimateReport coarse;
    EstimateReport fine;
    double u0 = 0.0;
    double defect_coarse = 0.0;
    double defect_fine = 0.0;
    double se_coarse = 0.0;
    double se_fine = 0.0;
    double dt_allowance = 0.0;
    double grid_allowance = 0.0;
    double relative_residual = 0.0;
    double exit_fraction = 0.0;
    bool defect_shrinks = false;
};

/// Checks E int_0^T e^{-lam phi_s} f(s, X_s) ds = u(0, x0) - E u(T, X_T) e^{-lam phi_T}
/// with u = solve_variable(spec, f) on grid, at dt and dt/2; the time
/// integral uses the trapezoid rule. Each path's defect (left side minus
/// right side) is averaged; pass requires
/// |mean defect| <= se_multiplier * SE + e_dt + grid allowance, where e_dt is
/// 2 |D(dt) - D(dt/2)| at dt and |D(dt) - D(dt/2)| at dt/2.
/// Throws RegimeError if more than max_exit_fraction of paths leave the box.
FeynmanKacResult feynman_kac_check(const ProblemSpec& spec, const Grid2& grid, const SourceFn& f, double x0,
                                   double t_end, double dt, std::size_t n_paths, std::uint64_t master_seed,
                                   const FeynmanKacOptions& options = {});

}  // namespace stablelab
