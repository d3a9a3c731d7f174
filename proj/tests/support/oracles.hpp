#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "stablelab/spectral_grid.hpp"

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Jump-measure constant for the symbol -|omega|^alpha / 2 in the
/// symmetrised form int_0^inf [g(x+z) + g(x-z) - 2 g(x)] c1 z^{-1-alpha} dz.
inline double c1_closed_form(double alpha) {
    return 1.0 / (4.0 * (-std::tgamma(-alpha) * std::cos(pi * alpha / 2.0)));
}

/// Smallest lam in [0, lam_max] with
///   min_omega [ (lam + omega^alpha)^2 - k2 omega^2 ] >= 0,
/// omega scanned on a log grid over [1e-6, 1e6]. Bisection on lam.
inline double brute_force_threshold(double k2, double alpha, double lam_max = 100.0,
                                    std::size_t n_omega = 400000) {
    std::vector<double> om(n_omega), om_a(n_omega);
    const double lo = std::log(1e-6), hi = std::log(1e6);
    for (std::size_t i = 0; i < n_omega; ++i) {
        om[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_omega - 1));
        om_a[i] = std::pow(om[i], alpha);
    }
    auto holds = [&](double lam) {
        for (std::size_t i = 0; i < n_omega; ++i) {
            const double l = lam + om_a[i];
            if (l * l - k2 * om[i] * om[i] < 0.0) return false;
        }
        return true;
    };
    if (holds(0.0)) return 0.0;
    double a = 0.0, b = lam_max;
    for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
        const double m = 0.5 * (a + b);
        (holds(m) ? b : a) = m;
    }
    return b;
}

/// delta: mu^alpha (lam + w^alpha)^2 >= 4 K^2 / mu^alpha w^2.
inline double brute_force_delta(double mu, double K, double alpha) {
    const double ma = std::pow(mu, alpha);
    return brute_force_threshold(4.0 * K * K / (ma * ma), alpha);
}

/// lambda0: M2 w^2 <= (lam + w^alpha)^2 / 2.
inline double brute_force_lambda0(double M2, double alpha) {
    return brute_force_threshold(2.0 * M2, alpha);
}

/// pi int_R dw / (2 lam + |w|^alpha) through the Beta integral
/// int_0^inf dv / (1 + v^alpha) = Gamma(1/alpha) Gamma(1 - 1/alpha) / alpha.
inline double m1_beta(double lam, double alpha) {
    const double beta = std::tgamma(1.0 / alpha) * std::tgamma(1.0 - 1.0 / alpha) / alpha;
    return pi * 2.0 * std::pow(2.0 * lam, 1.0 / alpha - 1.0) * beta;
}

/// Gaussian source g(t) h(x) with g(t) = exp(-(t - t0)^2 / (2 st^2)),
/// h(x) = exp(-(x - xc)^2 / (2 sx^2)).
struct GaussSource {
    double t0 = 0.0;
    double st = 1.0;
    double xc = 0.0;
    double sx = 1.0;
    double operator()(double t, double x) const {
        const double a = (t - t0) / st, b = (x - xc) / sx;
        return std::exp(-0.5 * (a * a + b * b));
    }
    /// E f(t, x + W_s), W Brownian with variance s.
    double heat(double t, double x, double s) const {
        const double a = (t - t0) / st;
        const double v = sx * sx + s;
        return std::exp(-0.5 * a * a) * sx / std::sqrt(v) * std::exp(-(x - xc) * (x - xc) / (2.0 * v));
    }
};

/// int_0^T e^{-rate s} E f(s, x0 + W_s) ds by adaptive Gauss-Kronrod.
inline double heat_resolvent_path(const GaussSource& f, double x0, double T, double rate) {
    auto g = [&](double s) { return std::exp(-rate * s) * f.heat(s, x0, s); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, 0.0, T, 15, 1e-13);
}

/// u(t, x) = int_0^inf e^{-rate s} E f(t + s, x + W_s) ds, the bounded
/// solution of u_t + u_xx / 2 - rate u + f = 0.
inline double heat_resolvent(const GaussSource& f, double t, double x, double rate) {
    auto g = [&](double s) { return std::exp(-rate * s) * f.heat(t + s, x, s); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        g, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-13);
}

/// Real field with independent uniform values in [-1, 1].
inline stablelab::GridFn2 random_field(const stablelab::Grid2& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(g.size());
    for (auto& x : v) x = u(rng);
    return stablelab::GridFn2::from_real(g, v);
}

/// Real trigonometric polynomial with random coefficients on the modes
/// |j| <= mt, |k| <= mx of the grid, times exp(-(x/sx)^2 - (t/st)^2) when
/// an envelope is requested (so it decays toward the box edge).
struct TrigField {
    struct Mode {
        double tau, omega, c, s;
    };
    std::vector<Mode> modes;
    double st = 0.0, sx = 0.0;

    TrigField(const stablelab::Grid2& g, int mt, int mx, std::mt19937_64& rng) {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int j = 0; j <= mt; ++j)
            for (int k = -mx; k <= mx; ++k) {
                if (j == 0 && k < 0) continue;
                modes.push_back({2 * pi * j / g.len_t(), 2 * pi * k / g.len_x(), u(rng), u(rng)});
            }
    }
    double operator()(double t, double x) const {
        double v = 0.0;
        for (const auto& m : modes) {
            const double ph = m.tau * t + m.omega * x;
            v += m.c * std::cos(ph) + m.s * std::sin(ph);
        }
        return v;
    }
};

}  // namespace oracle
