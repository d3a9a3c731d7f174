#include "stablelab/stable_process.hpp"

#include <numbers>

namespace stablelab {

double characteristic_exponent(double xi, double alpha) {
    if (!(alpha > 0.0 && alpha <= 2.0))
        throw DomainError("characteristic_exponent: alpha must lie in (0, 2]");
    return 0.5 * std::pow(std::abs(xi), alpha);
}

StableLaw::StableLaw(double alpha) : alpha_(alpha) {
    if (!(alpha > 1.0 && alpha <= 2.0)) throw DomainError("StableLaw: alpha must lie in (1, 2]");
}

double sample_increment(const StableLaw& law, double dt, Rng& rng) {
    if (!(dt > 0.0)) throw ContractError("sample_increment: dt must be positive");
    const double alpha = law.alpha();
    const double v = std::numbers::pi * (rng.uniform() - 0.5);
    const double w = rng.exponential();
    if (law.gaussian()) {
        // 2 sin(V) sqrt(W) ~ N(0, 2); scale (dt/2)^{1/2} gives variance dt.
        return std::sqrt(0.5 * dt) * 2.0 * std::sin(v) * std::sqrt(w);
    }
    const double s = std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
                     std::pow(std::cos(v - alpha * v) / w, (1.0 - alpha) / alpha);
    return std::pow(0.5 * dt, 1.0 / alpha) * s;
}

GridFn2 apply_generator_spectral(const GridFn2& g, double alpha) {
    if (!(alpha > 0.0 && alpha <= 2.0))
        throw DomainError("apply_generator_spectral: alpha must lie in (0, 2]");
    return filter(g, [alpha](double, double omega) { return generator_symbol(omega, alpha); });
}

GridFn2 semigroup_apply(const GridFn2& g, double t, double alpha) {
    if (!(t >= 0.0)) throw ContractError("semigroup_apply: t must be nonnegative");
    if (t == 0.0) return g;
    return filter(g, [alpha, t](double, double omega) {
        return std::exp(t * generator_symbol(omega, alpha));
    });
}

GeneratorQuadrature GeneratorQuadrature::doubled() const {
    GeneratorQuadrature q = *this;
    q.n_nodes *= 2;
    q.max_panel *= 0.5;
    return q;
}

JumpRule::JumpRule(const GeneratorQuadrature& q, double alpha) {
    if (!(q.inner_cut > 0.0 && q.outer_cut > q.inner_cut && q.n_nodes > 0 && q.max_panel > 0.0))
        throw ContractError("JumpRule: inconsistent quadrature parameters");
    constexpr std::array<double, 4> x{-0.8611363115940526, -0.3399810435848563,
                                      0.3399810435848563, 0.8611363115940526};
    constexpr std::array<double, 4> w{0.3478548451374538, 0.6521451548625461,
                                      0.6521451548625461, 0.3478548451374538};
    const double ratio =
        std::pow(q.outer_cut / q.inner_cut, 1.0 / static_cast<double>(q.n_nodes));
    double a = q.inner_cut;
    for (std::size_t cell = 0; cell < q.n_nodes; ++cell) {
        const double b = cell + 1 == q.n_nodes ? q.outer_cut : a * ratio;
        const auto pieces = static_cast<std::size_t>(std::ceil((b - a) / q.max_panel));
        const double width = (b - a) / static_cast<double>(pieces);
        for (std::size_t p = 0; p < pieces; ++p) {
            const double mid = a + width * (static_cast<double>(p) + 0.5);
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double z = mid + 0.5 * width * x[i];
                nodes_.push_back(z);
                weights_.push_back(q.c1 * 0.5 * width * w[i] * std::pow(z, -1.0 - alpha));
            }
        }
        a = b;
    }
    // (g(x+z) + g(x-z) - 2 g(x)) ~ g''(x) z^2 on (0, inner_cut).
    taylor_weight_ = q.c1 * std::pow(q.inner_cut, 2.0 - alpha) / (2.0 - alpha);
    // -2 g(x) int_{outer}^inf z^{-1-alpha} dz.
    far_weight_ = -2.0 * q.c1 * std::pow(q.outer_cut, -alpha) / alpha;
}

GeneratorQuadratureEvaluator::GeneratorQuadratureEvaluator(const GeneratorQuadrature& q,
                                                           double alpha)
    : gaussian_(alpha == 2.0), tol_(q.doubling_tol) {
    if (!(alpha > 1.0 && alpha <= 2.0))
        throw DomainError("generator quadrature: alpha must lie in (1, 2]");
    if (!gaussian_) {
        coarse_.emplace(q, alpha);
        fine_.emplace(q.doubled(), alpha);
    }
}

GeneratorQuadrature GeneratorQuadrature::calibrated(double alpha, double omega_ref) {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw DomainError("GeneratorQuadrature::calibrated: alpha must lie in (1, 2)");
    GeneratorQuadrature q;
    q.c1 = 1.0;
    auto wave = [omega_ref](double z) { return std::cos(omega_ref * z); };
    const double raw = JumpRule(q.doubled(), alpha).apply(wave, 0.0);
    q.c1 = -0.5 * std::pow(std::abs(omega_ref), alpha) / raw;
    return q;
}

}  // namespace stablelab
