#include "stablelab/constants.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stablelab/errors.hpp"

namespace stablelab {

namespace {

// Both thresholds reduce to: smallest lam >= 0 with lam + |w|^alpha >= c |w|
// for all w (take square roots of the two quadratic forms).
double min_gap(double lam, double c, double alpha) {
    auto gap = [&](double logw) {
        const double w = std::exp(logw);
        return lam + std::pow(w, alpha) - c * w;
    };
    const double lo = std::log(1e-12);
    const double hi = std::log(std::max(1e3, 4.0 * std::pow(c, 1.0 / (alpha - 1.0))));
    constexpr int n = 4000;
    const double step = (hi - lo) / n;
    int best = 0;
    double best_val = gap(lo);
    for (int i = 1; i <= n; ++i) {
        const double v = gap(lo + step * i);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    // Golden-section refinement on the bracketing cells.
    double a = lo + step * std::max(best - 1, 0);
    double b = lo + step * std::min(best + 1, n);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = gap(x1);
    double f2 = gap(x2);
    for (int it = 0; it < 200 && (b - a) > 1e-14; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = gap(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = gap(x2);
        }
    }
    return std::min({best_val, f1, f2});
}

double smallest_lambda(double c, double alpha) {
    if (c == 0.0) return 0.0;
    auto holds = [&](double lam) { return min_gap(lam, c, alpha) >= 0.0; };
    if (holds(0.0)) return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    while (!holds(hi)) {
        lo = hi;
        hi *= 2.0;
    }
    for (int it = 0; it < 300 && hi - lo > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (holds(mid) ? hi : lo) = mid;
    }
    return hi;
}

void check_alpha(double alpha, const char* who) {
    if (!(alpha > 1.0 && alpha <= 2.0))
        throw DomainError(std::string(who) + ": alpha must lie in (1, 2]");
}

}  // namespace

double delta_threshold(double mu, double K, double alpha) {
    check_alpha(alpha, "delta_threshold");
    if (!(mu > 0.0) || !(K >= 0.0)) throw ContractError("delta_threshold: need mu > 0, K >= 0");
    return smallest_lambda(2.0 * K / std::pow(mu, alpha), alpha);
}

double lambda0_threshold(double M2, double alpha) {
    check_alpha(alpha, "lambda0_threshold");
    if (!(M2 >= 0.0)) throw ContractError("lambda0_threshold: M2 must be nonnegative");
    return smallest_lambda(std::sqrt(2.0 * M2), alpha);
}

double m1_constant(double lam, double alpha) {
    if (!(alpha > 1.0))
        throw DomainError("m1_constant: the integral diverges for alpha <= 1");
    if (alpha > 2.0) throw DomainError("m1_constant: alpha must not exceed 2");
    if (!(lam > 0.0)) throw ContractError("m1_constant: lam must be positive");
    boost::math::quadrature::tanh_sinh<double> integrator;
    const double near =
        integrator.integrate([&](double w) { return 1.0 / (2.0 * lam + std::pow(w, alpha)); },
                             0.0, 1.0, 1e-12);
    // w = 1/v on [1, inf): v^{alpha-2} / (2 lam v^alpha + 1).
    const double far = integrator.integrate(
        [&](double v) { return std::pow(v, alpha - 2.0) / (2.0 * lam * std::pow(v, alpha) + 1.0); },
        0.0, 1.0, 1e-12);
    return 2.0 * std::numbers::pi * (near + far);
}

double delta_closed_form(double mu, double K, double alpha) {
    const double c = 2.0 * K / std::pow(mu, alpha);
    return (alpha - 1.0) * std::pow(c / alpha, alpha / (alpha - 1.0));
}

double lambda0_closed_form(double M2, double alpha) {
    const double c = std::sqrt(2.0 * M2);
    return (alpha - 1.0) * std::pow(c / alpha, alpha / (alpha - 1.0));
}

double m1_closed_form(double lam, double alpha) {
    const double pi = std::numbers::pi;
    return 2.0 * pi * pi * std::pow(2.0 * lam, 1.0 / alpha - 1.0) / (alpha * std::sin(pi / alpha));
}

double drift_absorption_constant(const ProblemSpec& spec) {
    const double ellipticity = std::min(1.0, std::pow(spec.mu, spec.alpha));
    const double r = spec.K / ellipticity;
    return r * r;
}

double lambda_threshold(const ProblemSpec& spec) {
    return std::max(delta_threshold(spec.mu, spec.K, spec.alpha),
                    0.5 * lambda0_threshold(drift_absorption_constant(spec), spec.alpha));
}

}  // namespace stablelab
