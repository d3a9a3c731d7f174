#pragma once

#include <functional>
#include <string>
#include <type_traits>
#include <utility>

#include "stablelab/spectral_grid.hpp"

namespace stablelab {

/// A measurable coefficient c(t, x).
///
/// `smoothing`, when present, maps eps to the exact convolution of c with
/// the mollifier kernel of radius eps; piecewise-constant and trigonometric
/// coefficients know theirs in closed form. Otherwise the mollified value is
/// obtained by quadrature (see mollifier.hpp).
struct Coefficient {
    using Field = std::function<double(double, double)>;
    Field value;
    std::function<Field(double)> smoothing;

    Coefficient() = default;
    template <typename F>
        requires std::is_invocable_r_v<double, F, double, double>
    Coefficient(F f) : value(std::move(f)) {}
    Coefficient(Field v, std::function<Field(double)> s) : value(std::move(v)), smoothing(std::move(s)) {}

    double operator()(double t, double x) const { return value(t, x); }

    static Coefficient constant(double c);
};

/// Coefficients and constants of
///
///   u_t + |b|^alpha L u + a u_x - lam (1 + |b|^alpha) u + f = 0
///
/// together with the certified bounds 0 < mu <= |b| <= nu and |a| <= K.
struct ProblemSpec {
    Coefficient a;
    Coefficient b;
    double mu = 1.0;
    double nu = 1.0;
    double K = 0.0;
    double alpha = 1.5;
    double lam = 1.0;

    /// Scalar ranges: 0 < mu <= nu, K >= 0, alpha in (1, 2], lam > 0.
    void validate() const;

    /// Asserts the coefficient bounds at every grid node. Throws
    /// ContractError naming the first offending point.
    void check_bounds(const Grid2& grid) const;

    /// |b|^alpha at every grid node.
    GridFn2 diffusion_on(const Grid2& grid) const;
    /// a at every grid node.
    GridFn2 drift_on(const Grid2& grid) const;
};

/// u_t + |b|^alpha L u + a u_x - lam (1 + |b|^alpha) u for a physical field u.
GridFn2 apply_operator(const ProblemSpec& spec, const GridFn2& u);

/// The source f that makes u an exact grid solution, f = -apply_operator(u).
GridFn2 manufactured_source(const ProblemSpec& spec, const GridFn2& u);

/// Grid L2 norm of u_t + |b|^alpha L u + a u_x - lam (1 + |b|^alpha) u + f.
double residual_l2(const ProblemSpec& spec, const GridFn2& u, const GridFn2& f);

}  // namespace stablelab
