#include "stablelab/pde_solver.hpp"

#include <algorithm>
#include <sstream>

#include "stablelab/constants.hpp"
#include "stablelab/stable_process.hpp"

namespace stablelab {

GridFn2 solve_constant(const GridFn2& f, double lam, double c, double alpha, ConstantForm form) {
    if (f.domain() != Domain::physical)
        throw ContractError("solve_constant: expected a physical-domain source");
    if (!(lam > 0.0)) throw ContractError("solve_constant: lam must be positive");
    if (form == ConstantForm::sigma && !(c > 0.0))
        throw ContractError("solve_constant: c must be positive");
    const double diff = form == ConstantForm::sigma ? c : 1.0;
    const double shift = form == ConstantForm::sigma ? lam * (1.0 + c) : lam;
    const GridFn2 ff = forward_transform(f);
    const Grid2& g = f.grid();
    // The discrete d/dt symbol vanishes on the Nyquist row (alias average of
    // -i tau and +i tau); invert that symbol, not the average of inverses.
    const double nyq = g.n_t() > 1 ? std::abs(g.tau_at(g.n_t() / 2)) : -1.0;
    const GridFn2 fu = apply_multiplier(ff, [&](double tau, double omega) {
        const double it = std::abs(std::abs(tau) - nyq) <= 1e-12 * nyq ? 0.0 : -tau;
        const cplx divisor(diff * generator_symbol(omega, alpha) - shift, it);
        // Re(divisor) <= -shift < 0 on every frequency.
        if (!(std::abs(divisor) > 0.0))
            throw InvariantError("solve_constant: divisor vanished at a grid frequency");
        return 1.0 / divisor;
    });
    return inverse_transform(fu);
}

namespace {

// The stage operator A u = u_t + sigma L u + drift_scale * a u_x - lam (1 + sigma) u.
struct StageOperator {
    const ProblemSpec& spec;
    const GridFn2& sigma;
    const GridFn2& drift;
    double drift_scale;

    GridFn2 apply(const GridFn2& u) const {
        const GridFn2 fu = forward_transform(u);
        const GridFn2 dtx = inverse_transform(
            apply_multiplier(fu, [](double tau, double omega) { return cplx(omega, -tau); }),
            Output::complex);
        const double al = spec.alpha;
        const GridFn2 lu = inverse_transform(apply_multiplier(
            fu, [al](double, double omega) { return generator_symbol(omega, al); }));
        std::vector<cplx> out(u.size());
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double s = sigma.values()[i].real();
            out[i] = dtx.values()[i].real() + s * lu.values()[i].real() +
                     drift_scale * drift.values()[i].real() * dtx.values()[i].imag() -
                     spec.lam * (1.0 + s) * u.values()[i].real();
        }
        return GridFn2(u.grid(), Domain::physical, std::move(out));
    }
};

}  // namespace

SolveResult solve_variable(const ProblemSpec& spec, const GridFn2& f, const SolverOptions& options) {
    if (f.domain() != Domain::physical)
        throw ContractError("solve_variable: expected a physical-domain source");
    if (!(options.tol > 0.0) || options.max_iter == 0)
        throw ContractError("solve_variable: tol and max_iter must be positive");
    const Grid2& grid = f.grid();
    spec.check_bounds(grid);
    if (options.enforce_thresholds) {
        const double delta = delta_threshold(spec.mu, spec.K, spec.alpha);
        const double lambda0 = lambda0_threshold(drift_absorption_constant(spec), spec.alpha);
        if (spec.lam < delta || spec.lam < 0.5 * lambda0 + options.threshold_margin) {
            std::ostringstream os;
            os << "solve_variable: lam = " << spec.lam << " is below the validity threshold (delta = "
               << delta << ", lambda0 = " << lambda0 << ", need lam >= delta and lam > lambda0/2)";
            throw PreconditionError(os.str(), delta, lambda0);
        }
    }

    SolveResult result{GridFn2::zeros(grid), 0.0, 0, {}, {}};
    const double f_norm = l2_norm(f);
    if (f_norm == 0.0) return result;

    const GridFn2 diffusion = spec.diffusion_on(grid);
    const GridFn2 drift = spec.drift_on(grid);
    const double lo = std::pow(spec.mu, spec.alpha);
    const double hi = std::pow(spec.nu, spec.alpha);
    bool has_drift = false;
    for (const auto& z : drift.values()) has_drift = has_drift || z.real() != 0.0;

    const GridFn2 neg_f = -1.0 * f;
    GridFn2& u = result.u;
    GridFn2 sigma = GridFn2::zeros(grid);

    auto run_stage = [&](int step, double s, double stage_tol) {
        double c_star;
        double drift_scale;
        if (step == 1) {
            for (std::size_t i = 0; i < sigma.size(); ++i)
                sigma.values()[i] = 1.0 - s + s * diffusion.values()[i].real();
            c_star = (1.0 - s) + s * 0.5 * (lo + hi);
            drift_scale = 0.0;
        } else {
            sigma = diffusion;
            c_star = 0.5 * (lo + hi);
            drift_scale = s;
        }
        const StageOperator op{spec, sigma, drift, drift_scale};
        HomotopyStage stage{step, s, 0, 0.0};
        GridFn2 r = neg_f - op.apply(u);
        double res = l2_norm(r);
        const double start = res;
        while (res > stage_tol * f_norm) {
            if (result.iterations >= options.max_iter || !std::isfinite(res) ||
                res > 1e6 * std::max(start, f_norm)) {
                std::ostringstream os;
                os << "solve_variable: no convergence at step " << step << ", s = " << s
                   << " after " << result.iterations << " iterations (relative residual "
                   << res / f_norm << ")";
                throw DivergenceError(os.str(), result.residual_history);
            }
            u += solve_constant(r, spec.lam, c_star, spec.alpha, ConstantForm::sigma);
            r = neg_f - op.apply(u);
            res = l2_norm(r);
            ++stage.iterations;
            ++result.iterations;
            result.residual_history.push_back(res);
        }
        stage.residual = res;
        result.homotopy_path.push_back(stage);
    };

    const auto& sched = options.schedule;
    const double loose = std::max(options.tol, options.stage_tol);
    for (std::size_t i = 0; i < sched.size(); ++i) {
        const bool last = i + 1 == sched.size() && !has_drift;
        if (sched[i] == 0.0) {
            // sigma = 1 is solved exactly by the constant-coefficient inverse.
            u = solve_constant(neg_f, spec.lam, 1.0, spec.alpha, ConstantForm::sigma);
            result.homotopy_path.push_back({1, 0.0, 0, 0.0});
            continue;
        }
        run_stage(1, sched[i], last ? options.tol : loose);
    }
    if (has_drift) {
        for (std::size_t i = 0; i < sched.size(); ++i) {
            if (sched[i] == 0.0) continue;
            run_stage(2, sched[i], i + 1 == sched.size() ? options.tol : loose);
        }
    }
    result.residual_l2 = residual_l2(spec, u, f);
    return result;
}

}  // namespace stablelab
