#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>
#include <algorithm>

#include "stablelab/errors.hpp"
#include "stablelab/rng.hpp"
#include "stablelab/spectral_grid.hpp"

namespace stablelab {

/// psi(xi) = |xi|^alpha / 2, alpha in (0, 2].
double characteristic_exponent(double xi, double alpha);

/// Symmetric alpha-stable law normalised so that E exp(i xi Z_t) = exp(-t |xi|^alpha / 2).
class StableLaw {
public:
    explicit StableLaw(double alpha);
    double alpha() const { return alpha_; }
    bool gaussian() const { return alpha_ == 2.0; }

private:
    double alpha_;
};

/// One increment Z_{s+dt} - Z_s.
///
/// Chambers-Mallows-Stuck for the symmetric case, scaled by (dt/2)^{1/alpha}.
/// At alpha = 2 the same two uniforms give the Box-Muller Gaussian with
/// variance dt. Consumes exactly two draws from rng.
double sample_increment(const StableLaw& law, double dt, Rng& rng);

/// Symbol of the generator, -|omega|^alpha / 2.
inline double generator_symbol(double omega, double alpha) {
    return -0.5 * std::pow(std::abs(omega), alpha);
}

/// L g via the Fourier multiplier -|omega|^alpha / 2 acting on x.
GridFn2 apply_generator_spectral(const GridFn2& g, double alpha);

/// T_t g via the multiplier exp(-t |omega|^alpha / 2).
GridFn2 semigroup_apply(const GridFn2& g, double t, double alpha);

/// Composite Gauss-Legendre rule for the compensated jump integral
///
///   L g(x) = c1 * int_0^inf [g(x+z) + g(x-z) - 2 g(x)] z^{-1-alpha} dz,
///
/// the symmetrised form of the compensated jump integral. Below inner_cut
/// the bracket is replaced by its Taylor term g''(x) z^2; beyond outer_cut
/// only the -2 g(x) part is kept, integrated in closed form. Panels are
/// n_nodes geometric cells on [inner_cut, outer_cut], each split further so
/// no panel exceeds max_panel.
struct GeneratorQuadrature {
    double c1 = 1.0;
    double inner_cut = 1e-4;
    double outer_cut = 1e4;
    std::size_t n_nodes = 4096;
    double max_panel = 0.5;
    /// Relative tolerance of the node-doubling convergence check.
    double doubling_tol = 1e-6;

    /// Fixes c1 so the rule reproduces -|omega_ref|^alpha / 2 on cos(omega_ref x).
    static GeneratorQuadrature calibrated(double alpha, double omega_ref = 1.0);

    GeneratorQuadrature doubled() const;
};

/// Node table of a GeneratorQuadrature for one alpha: abscissae z_i > 0 and
/// weights w_i already multiplied by c1 * z_i^{-1-alpha}.
class JumpRule {
public:
    JumpRule(const GeneratorQuadrature& q, double alpha);

    template <typename G>
    /// With magnitude set, also accumulates sum |w_i| (|g(x+z_i)| + |g(x-z_i)| + 2 |g(x)|).
    auto apply(G& g, double x, double* magnitude = nullptr) const {
        using R = std::decay_t<decltype(g(x))>;
        const R gx = g(x);
        R acc = taylor_weight_ * second_derivative(g, x);
        double mag = std::abs(acc) + std::abs(far_weight_ * gx);
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const R gp = g(x + nodes_[i]);
            const R gm = g(x - nodes_[i]);
            acc += weights_[i] * (gp + gm - 2.0 * gx);
            mag += std::abs(weights_[i]) * (std::abs(gp) + std::abs(gm) + 2.0 * std::abs(gx));
        }
        acc += far_weight_ * gx;
        if (magnitude) *magnitude = mag;
        return acc;
    }

    std::size_t size() const { return nodes_.size(); }

    template <typename G>
    static auto second_derivative(G& g, double x, double h = 1e-3) {
        return (g(x + h) - 2.0 * g(x) + g(x - h)) / (h * h);
    }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
    double taylor_weight_ = 0.0;
    double far_weight_ = 0.0;
};

/// Evaluates L g at many points with one pair of node tables.
///
/// Each evaluation runs the rule and its doubled refinement; disagreement
/// beyond q.doubling_tol (relative to the larger of |result|, |g(x)| and
/// the summed absolute integrand) raises QuadratureError. At alpha = 2 the
/// generator is g''/2, taken by a central difference.
class GeneratorQuadratureEvaluator {
public:
    GeneratorQuadratureEvaluator(const GeneratorQuadrature& q, double alpha);

    template <typename G>
        requires std::invocable<G&, double>
    auto operator()(G&& g, double x) const {
        if (gaussian_) return 0.5 * JumpRule::second_derivative(g, x, 1e-4);
        const auto coarse = coarse_->apply(g, x);
        double mag = 0.0;
        const auto fine = fine_->apply(g, x, &mag);
        const double scale = std::max({std::abs(fine), std::abs(g(x)), mag, 1e-300});
        if (std::abs(fine - coarse) > tol_ * scale)
            throw QuadratureError("generator quadrature: node doubling changed the result by " +
                                  std::to_string(std::abs(fine - coarse)));
        return fine;
    }

private:
    bool gaussian_;
    double tol_;
    std::optional<JumpRule> coarse_;
    std::optional<JumpRule> fine_;
};

/// L g(x) for a C^2_b callable g (real or complex valued). Builds the node
/// tables on every call; use GeneratorQuadratureEvaluator for batches.
template <typename G>
    requires std::invocable<G&, double>
auto apply_generator_quadrature(G&& g, const GeneratorQuadrature& q, double alpha, double x) {
    return GeneratorQuadratureEvaluator(q, alpha)(g, x);
}

}  // namespace stablelab
