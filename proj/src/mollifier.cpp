#include "stablelab/mollifier.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace stablelab {

namespace {

double raw_bump(double s) {
    const double q = 1.0 - 4.0 * s * s;
    return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

double integrate(auto&& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

const double& bump_mass() {
    static const double z = 2.0 * integrate(raw_bump, 0.0, 0.5);
    return z;
}

// CDF table on [-1/2, 1/2]; cubic Hermite interpolation with the density
// as slope.
struct CdfTable {
    static constexpr std::size_t n = 4096;
    double h = 1.0 / n;
    std::vector<double> value;
    std::vector<double> slope;

    CdfTable() : value(n + 1), slope(n + 1) {
        const double z = bump_mass();
        value[0] = 0.0;
        slope[0] = 0.0;
        for (std::size_t i = 1; i <= n; ++i) {
            const double a = -0.5 + h * static_cast<double>(i - 1);
            const double b = -0.5 + h * static_cast<double>(i);
            value[i] = value[i - 1] +
                       boost::math::quadrature::gauss<double, 15>::integrate(raw_bump, a, b) / z;
            slope[i] = raw_bump(b) / z;
        }
        // Pin the endpoint; the accumulated sum is within a few ulps of 1.
        value[n] = 1.0;
    }

    double operator()(double s) const {
        if (s <= -0.5) return 0.0;
        if (s >= 0.5) return 1.0;
        const double pos = (s + 0.5) / h;
        std::size_t i = static_cast<std::size_t>(pos);
        if (i >= n) i = n - 1;
        const double r = pos - static_cast<double>(i);
        const double r2 = r * r;
        const double r3 = r2 * r;
        return (2 * r3 - 3 * r2 + 1) * value[i] + (r3 - 2 * r2 + r) * h * slope[i] +
               (-2 * r3 + 3 * r2) * value[i + 1] + (r3 - r2) * h * slope[i + 1];
    }
};

const CdfTable& cdf_table() {
    static const CdfTable table;
    return table;
}

}  // namespace

Mollifier::Mollifier(double eps) : eps_(eps) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("Mollifier: eps must be positive");
}

double Mollifier::density(double s) { return raw_bump(s) / bump_mass(); }

double Mollifier::cdf(double s) { return cdf_table()(s); }

double Mollifier::density_transform(double k) {
    if (k == 0.0) return 1.0;
    // Composite 20-point Gauss-Legendre, about four panels per period.
    using Rule = boost::math::quadrature::gauss<double, 20>;
    const auto panels = static_cast<std::size_t>(std::max(16.0, std::ceil(std::abs(k) / std::numbers::pi)));
    const double h = 0.5 / static_cast<double>(panels);
    auto f = [k](double s) { return raw_bump(s) * std::cos(k * s); };
    double acc = 0.0;
    for (std::size_t i = 0; i < panels; ++i)
        acc += Rule::integrate(f, h * static_cast<double>(i), h * static_cast<double>(i + 1));
    return 2.0 * acc / bump_mass();
}

double Mollifier::kernel(double t, double x) const {
    return density(t / eps_) * density(x / eps_) / (eps_ * eps_);
}

double Mollifier::transform(double tau, double omega) const {
    return density_transform(eps_ * tau) * density_transform(eps_ * omega);
}

GridFn2 mollify(const GridFn2& u, const Mollifier& m) {
    const Grid2& g = u.grid();
    if ((g.n_t() > 1 && !(m.eps() < 0.25 * g.len_t())) || !(m.eps() < 0.25 * g.len_x()))
        throw DomainError("mollify: eps must be below a quarter of the box side");
    // The symbol is separable; tabulate each factor once.
    std::vector<double> pt(g.n_t());
    std::vector<double> px(g.n_x());
    for (std::size_t j = 0; j < g.n_t(); ++j) pt[j] = Mollifier::density_transform(m.eps() * g.tau_at(j));
    for (std::size_t k = 0; k < g.n_x(); ++k) px[k] = Mollifier::density_transform(m.eps() * g.omega_at(k));
    GridFn2 fu = forward_transform(u);
    for (std::size_t j = 0; j < g.n_t(); ++j)
        for (std::size_t k = 0; k < g.n_x(); ++k) fu(j, k) *= pt[j] * px[k];
    return inverse_transform(fu);
}

double smooth_value(const Coefficient& c, double t, double x, double eps) {
    if (!(eps > 0.0)) throw DomainError("smooth_value: eps must be positive");
    if (c.smoothing) return c.smoothing(eps)(t, x);
    using Rule = boost::math::quadrature::gauss<double, 32>;
    static const auto table = [] {
        std::vector<std::array<double, 2>> nodes;
        const auto& a = Rule::abscissa();
        const auto& w = Rule::weights();
        // Nodes on [-1/2, 1/2]; the stored abscissae cover [0, 1] of [-1, 1].
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double s = 0.5 * a[i];
            const double wt = 0.5 * w[i] * Mollifier::density(s);
            nodes.push_back({s, wt});
            if (a[i] != 0.0) nodes.push_back({-s, wt});
        }
        return nodes;
    }();
    double acc = 0.0;
    for (const auto& [si, wi] : table)
        for (const auto& [sj, wj] : table) acc += wi * wj * c.value(t - eps * si, x - eps * sj);
    return acc;
}

Coefficient mollified(const Coefficient& c, double eps) {
    if (!(eps > 0.0)) throw DomainError("mollified: eps must be positive");
    if (c.smoothing) return Coefficient(c.smoothing(eps));
    return Coefficient([c, eps](double t, double x) { return smooth_value(c, t, x, eps); });
}

}  // namespace stablelab
