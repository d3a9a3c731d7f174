#include "stablelab/problem.hpp"

#include <sstream>

#include "stablelab/stable_process.hpp"

namespace stablelab {

Coefficient Coefficient::constant(double c) {
    const Field f = [c](double, double) { return c; };
    return Coefficient(f, [f](double) { return f; });
}

void ProblemSpec::validate() const {
    if (!a.value || !b.value) throw ContractError("ProblemSpec: coefficients a and b must be set");
    if (!(mu > 0.0)) throw ContractError("ProblemSpec: mu must be positive");
    if (!(nu >= mu)) throw ContractError("ProblemSpec: mu must not exceed nu");
    if (!(K >= 0.0)) throw ContractError("ProblemSpec: K must be nonnegative");
    if (!(alpha > 1.0 && alpha <= 2.0)) throw DomainError("ProblemSpec: alpha must lie in (1, 2]");
    if (!(lam > 0.0)) throw ContractError("ProblemSpec: lam must be positive");
}

void ProblemSpec::check_bounds(const Grid2& grid) const {
    validate();
    // Relative slack for bounds that are attained exactly in floating point.
    const double slack = 1e-12;
    for (std::size_t j = 0; j < grid.n_t(); ++j) {
        const double t = grid.t_at(j);
        for (std::size_t k = 0; k < grid.n_x(); ++k) {
            const double x = grid.x_at(k);
            const double bv = std::abs(b(t, x));
            const double av = std::abs(a(t, x));
            if (bv < mu * (1.0 - slack) || bv > nu * (1.0 + slack) || av > K * (1.0 + slack) + slack) {
                std::ostringstream os;
                os << "ProblemSpec: coefficient bounds violated at (t, x) = (" << t << ", " << x
                   << "): |b| = " << bv << ", |a| = " << av << " against mu = " << mu
                   << ", nu = " << nu << ", K = " << K;
                throw ContractError(os.str());
            }
        }
    }
}

GridFn2 ProblemSpec::diffusion_on(const Grid2& grid) const {
    const double al = alpha;
    const auto& bc = b;
    return GridFn2::sample(grid, [&](double t, double x) { return std::pow(std::abs(bc(t, x)), al); });
}

GridFn2 ProblemSpec::drift_on(const Grid2& grid) const {
    const auto& ac = a;
    return GridFn2::sample(grid, [&](double t, double x) { return ac(t, x); });
}

namespace {

GridFn2 operator_with_fields(const ProblemSpec& spec, const GridFn2& u, const GridFn2& diff,
                             const GridFn2& drift) {
    const GridFn2 fu = forward_transform(u);
    // Real part u_t, imaginary part u_x: both symbols are Hermitian, so one
    // complex inverse carries the two real fields.
    const GridFn2 dtx = inverse_transform(
        apply_multiplier(fu, [](double tau, double omega) { return cplx(omega, -tau); }),
        Output::complex);
    const double al = spec.alpha;
    const GridFn2 lu = inverse_transform(
        apply_multiplier(fu, [al](double, double omega) { return generator_symbol(omega, al); }));
    std::vector<cplx> out(u.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double bb = diff.values()[i].real();
        const double aa = drift.values()[i].real();
        out[i] = dtx.values()[i].real() + bb * lu.values()[i].real() +
                 aa * dtx.values()[i].imag() - spec.lam * (1.0 + bb) * u.values()[i].real();
    }
    return GridFn2(u.grid(), Domain::physical, std::move(out));
}

}  // namespace

GridFn2 apply_operator(const ProblemSpec& spec, const GridFn2& u) {
    if (u.domain() != Domain::physical)
        throw ContractError("apply_operator: expected a physical-domain field");
    return operator_with_fields(spec, u, spec.diffusion_on(u.grid()), spec.drift_on(u.grid()));
}

GridFn2 manufactured_source(const ProblemSpec& spec, const GridFn2& u) {
    return -1.0 * apply_operator(spec, u);
}

double residual_l2(const ProblemSpec& spec, const GridFn2& u, const GridFn2& f) {
    return l2_norm(apply_operator(spec, u) + f);
}

}  // namespace stablelab
