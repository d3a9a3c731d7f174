#include "stablelab/apriori.hpp"

#include <numbers>

#include "stablelab/constants.hpp"
#include "stablelab/stable_process.hpp"

namespace stablelab {

AprioriMeasurement measure_apriori(const ProblemSpec& spec, const GridFn2& u, const GridFn2& f) {
    if (u.domain() != Domain::physical || f.domain() != Domain::physical)
        throw ContractError("measure_apriori: expected physical-domain fields");
    if (!(u.grid() == f.grid())) throw ContractError("measure_apriori: u and f live on different grids");
    spec.validate();
    const double lam = spec.lam;
    const double al = spec.alpha;
    const double pi = std::numbers::pi;

    AprioriMeasurement m;
    m.sup_u = u.max_abs();
    m.h = norms(u, al);
    m.f_norm = l2_norm(f);
    const GridFn2 fu = forward_transform(u);
    const GridFn2 a = apply_multiplier(fu, [lam](double tau, double) { return cplx(-lam, -tau); });
    const GridFn2 b =
        apply_multiplier(fu, [lam, al](double, double omega) { return generator_symbol(omega, al) - lam; });
    const double na = l2_norm(a);
    const double nb = l2_norm(b);
    m.dt_part = na * na;
    m.gen_part = nb * nb;
    m.cross_term = inner_product(inverse_transform(a), inverse_transform(b));
    m.rhs_literal = m1_constant(lam, al) / (8.0 * std::pow(pi, 4)) * (m.dt_part + m.gen_part);
    // pi int dw / (2 lam + |w|^a / 2) = 2 pi int dw / (4 lam + |w|^a).
    const double m1_half = 2.0 * m1_constant(2.0 * lam, al);
    m.rhs_consistent = m1_half / (2.0 * pi * pi) * (m.dt_part + m.gen_part);
    m.boundary_mass = boundary_mass_fraction(u);
    m.lambda_threshold = lambda_threshold(spec);
    return m;
}

EstimateReport apriori_report(const ProblemSpec& spec, const GridFn2& u, const GridFn2& f,
                              const AprioriOptions& options) {
    const AprioriMeasurement m = measure_apriori(spec, u, f);
    EstimateReport r;
    const bool literal = options.constant == SupNormConstant::literal;
    r.name = literal ? "sup_norm_explicit" : "sup_norm_consistent";
    r.lhs = m.sup_u * m.sup_u;
    r.rhs = literal ? m.rhs_literal : m.rhs_consistent;
    r.implied_constant = m.f_norm > 0.0 ? m.h.h / m.f_norm : 0.0;
    r.regime_ok = spec.lam >= m.lambda_threshold && m.boundary_mass < options.boundary_tol;
    r.decide(r.lhs <= r.rhs * (1.0 + options.slack));
    r.add("sup_u", m.sup_u);
    r.add("h_norm", m.h.h);
    r.add("f_norm", m.f_norm);
    r.add("rhs_literal", m.rhs_literal);
    r.add("rhs_consistent", m.rhs_consistent);
    r.add("cross_term", m.cross_term);
    r.add("boundary_mass", m.boundary_mass);
    r.add("lambda_threshold", m.lambda_threshold);
    r.add("lam", spec.lam);
    r.add("alpha", spec.alpha);
    return r;
}

}  // namespace stablelab
