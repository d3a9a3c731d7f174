#pragma once

#include "stablelab/problem.hpp"
#include "stablelab/report.hpp"
#include "stablelab/spectral_grid.hpp"

namespace stablelab {

/// Grid measurements entering the a priori and sup-norm bounds.
struct AprioriMeasurement {
    double sup_u = 0.0;
    HNormBreakdown h;
    double f_norm = 0.0;
    /// ||u_t - lam u||^2 and ||L u - lam u||^2.
    double dt_part = 0.0;
    double gen_part = 0.0;
    /// M1 (|omega|^alpha symbol) / (8 pi^4) * (dt_part + gen_part).
    double rhs_literal = 0.0;
    /// Same Cauchy-Schwarz bound with the -|omega|^alpha/2 symbol and the
    /// (2 pi)^2 Plancherel factor: M1' / (2 pi^2) * (dt_part + gen_part),
    /// M1' = pi int d omega / (2 lam + |omega|^alpha / 2).
    double rhs_consistent = 0.0;
    /// int (u_t - lam u)(L u - lam u) dt dx.
    double cross_term = 0.0;
    double boundary_mass = 0.0;
    double lambda_threshold = 0.0;
};

AprioriMeasurement measure_apriori(const ProblemSpec& spec, const GridFn2& u, const GridFn2& f);

enum class SupNormConstant { literal, consistent };

struct AprioriOptions {
    double slack = 0.01;
    double boundary_tol = 1e-6;
    SupNormConstant constant = SupNormConstant::literal;
};

/// Sup-norm report: lhs = max |u|^2 over the grid, rhs the explicit bound
/// selected by options.constant, implied_constant = ||u||_H / ||f||. The
/// regime requires lam >= lambda_threshold(spec) and a boundary mass of u
/// below options.boundary_tol.
EstimateReport apriori_report(const ProblemSpec& spec, const GridFn2& u, const GridFn2& f,
                              const AprioriOptions& options = {});

}  // namespace stablelab
