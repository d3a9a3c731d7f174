#include "stablelab/krylov.hpp"

#include <cmath>
#include <sstream>

#include "stablelab/parallel.hpp"

namespace stablelab {

double BumpSource::operator()(double t, double x) const {
    auto p = [](double s) {
        const double q = 1.0 - 4.0 * s * s;
        return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
    };
    const double v = p((t - t0) / width_t) * p((x - x0) / width_x);
    if (v == 0.0) return 0.0;
    return scale * v * (1.0 + ripple * std::cos(ripple_freq * x));
}

std::vector<BumpSource> krylov_f_battery(const Grid2& grid) {
    std::vector<BumpSource> fs{
        {2.0, 0.0, 2.0, 2.0},
        {3.0, 1.0, 4.0, 1.0},
        {4.5, 0.0, 8.0, 1.0},
        {1.5, 0.0, 1.0, 8.0},
        {2.0, -2.5, 2.0, 2.0},
        {3.0, 0.5, 3.0, 3.0, 0.8, 4.0},
    };
    for (auto& f : fs) f.scale = 1.0 / l2_norm(GridFn2::sample(grid, f));
    return fs;
}

SourceFn grid_source(const GridFn2& f) {
    if (f.domain() != Domain::physical) throw ContractError("grid_source: expected a physical-domain field");
    return [f](double t, double x) { return interpolate(f, t, x, Interp::cubic, OutOfBox::zero); };
}

OccupationIntegrals occupation_integrals(const StablePath& path, const SourceFn& f, double lam, double t_stop,
                                         double m) {
    OccupationIntegrals r;
    const auto tau = stopping_index(path, m);
    const std::size_t n = path.steps();
    for (std::size_t k = 0; k < n; ++k) {
        const double t = path.times[k];
        const double h = path.times[k + 1] - t;
        const double v = f(t, path.states[k]) * h;
        r.undiscounted += v;
        r.discounted += std::exp(-lam * path.phi[k]) * v;
        if (t < t_stop && (!tau || k < *tau)) r.stopped += v;
    }
    return r;
}

std::vector<std::vector<OccupationIntegrals>> occupation_battery(
    const ProblemSpec& spec, const std::vector<SourceFn>& sources, double x0, double horizon, double dt,
    std::size_t n_paths, std::uint64_t master_seed, double t_stop, double m) {
    spec.validate();
    if (n_paths == 0) throw ContractError("occupation_battery: n_paths must be positive");
    const std::size_t steps = step_count(horizon, dt);
    const StableLaw law(spec.alpha);
    std::vector<std::vector<OccupationIntegrals>> out(sources.size(), std::vector<OccupationIntegrals>(n_paths));
    parallel_for(n_paths, [&](std::size_t i) {
        Rng rng = Rng::stream(master_seed, i);
        const StablePath p = simulate_path(spec, x0, dt, draw_increments(law, dt, steps, rng));
        for (std::size_t s = 0; s < sources.size(); ++s)
            out[s][i] = occupation_integrals(p, sources[s], spec.lam, t_stop, m);
    });
    return out;
}

namespace {

void check_source(const GridFn2& f, const char* who) {
    if (f.domain() != Domain::physical) throw ContractError(std::string(who) + ": expected a physical source");
    for (const auto& z : f.values())
        if (z.real() < 0.0) throw ContractError(std::string(who) + ": f must be nonnegative on the grid");
    if (boundary_mass_fraction(f) >= 1e-6)
        throw RegimeError(std::string(who) + ": f is not negligible near the box boundary");
}

double time_tail_fraction(const GridFn2& f, double horizon) {
    const Grid2& g = f.grid();
    double tail = 0.0;
    double total = 0.0;
    for (std::size_t j = 0; j < g.n_t(); ++j)
        for (std::size_t k = 0; k < g.n_x(); ++k) {
            const double v = std::norm(f(j, k));
            total += v;
            if (g.t_at(j) >= horizon || g.t_at(j) < 0.0) tail += v;
        }
    return total > 0.0 ? tail / total : 0.0;
}

EstimateReport mc_report(const std::string& name, std::span<const double> samples, double norm, double m_cal) {
    const MeanSe ms = mean_and_se(samples);
    EstimateReport r;
    r.name = name;
    r.lhs = ms.mean;
    r.se = ms.se;
    r.rhs = m_cal * norm;
    r.implied_constant = norm > 0.0 ? ms.mean / norm : 0.0;
    r.regime_ok = true;
    r.decide(std::isfinite(r.implied_constant) && r.lhs <= r.rhs);
    r.add("paths", static_cast<std::uint64_t>(samples.size()));
    r.add("f_norm", norm);
    return r;
}

}  // namespace

void check_krylov_regime(const ProblemSpec& spec, const GridFn2& f, double horizon, double lam,
                         bool discounted) {
    check_source(f, "krylov_functional");
    if (!(lam > 0.0)) throw ContractError("krylov_functional: lam must be positive");
    if (discounted) {
        const double tail = std::exp(-lam * (1.0 + std::pow(spec.mu, spec.alpha)) * horizon);
        if (!(tail < 1e-6)) throw RegimeError("krylov_functional: discount tail exp(-lam phi) is not below 1e-6");
    }
    if (time_tail_fraction(f, horizon) >= 1e-6)
        throw RegimeError("krylov_functional: f carries mass outside [0, horizon]");
}

EstimateReport krylov_functional(const ProblemSpec& spec, const GridFn2& f, double x0, double horizon,
                                 double dt, std::size_t n_paths, double lam, bool discounted,
                                 std::uint64_t master_seed, const KrylovOptions& options) {
    check_krylov_regime(spec, f, horizon, lam, discounted);
    ProblemSpec s = spec;
    s.lam = lam;
    const SourceFn src = options.exact ? options.exact : grid_source(f);
    const auto occ = occupation_battery(s, {src}, x0, horizon, dt, n_paths, master_seed, horizon,
                                        std::numeric_limits<double>::infinity());
    std::vector<double> v(n_paths);
    for (std::size_t i = 0; i < n_paths; ++i) v[i] = discounted ? occ[0][i].discounted : occ[0][i].undiscounted;
    EstimateReport r = mc_report(discounted ? "krylov_discounted" : "krylov", v, l2_norm(f), options.m_cal);
    r.add("dt", dt);
    r.add("horizon", horizon);
    r.add("lam", lam);
    r.add("seed", master_seed);
    return r;
}

double windowed_l2(const GridFn2& f, double t, double m) {
    const Grid2& g = f.grid();
    double acc = 0.0;
    for (std::size_t j = 0; j < g.n_t(); ++j) {
        const double tj = g.t_at(j);
        if (tj < 0.0 || tj > t) continue;
        for (std::size_t k = 0; k < g.n_x(); ++k)
            if (std::abs(g.x_at(k)) <= m) acc += std::norm(f(j, k));
    }
    return std::sqrt(acc * g.cell());
}

EstimateReport local_krylov(const ProblemSpec& spec, const GridFn2& f, double x0, double t, double m,
                            double dt, std::size_t n_paths, std::uint64_t master_seed,
                            const KrylovOptions& options) {
    check_source(f, "local_krylov");
    if (!(t > 0.0) || !(m > 0.0)) throw ContractError("local_krylov: t and m must be positive");
    const SourceFn src = options.exact ? options.exact : grid_source(f);
    const auto occ = occupation_battery(spec, {src}, x0, t, dt, n_paths, master_seed, t, m);
    std::vector<double> v(n_paths);
    for (std::size_t i = 0; i < n_paths; ++i) v[i] = occ[0][i].stopped;
    EstimateReport r = mc_report("local_krylov", v, windowed_l2(f, t, m), options.m_cal);
    r.add("dt", dt);
    r.add("t", t);
    r.add("m", m);
    r.add("seed", master_seed);
    return r;
}

FeynmanKacResult feynman_kac_check(const ProblemSpec& spec, const Grid2& grid, const SourceFn& f, double x0,
                                   double t_end, double dt, std::size_t n_paths, std::uint64_t master_seed,
                                   const FeynmanKacOptions& options) {
    spec.validate();
    if (n_paths < 2) throw ContractError("feynman_kac_check: need at least two paths");
    if (!(t_end > 0.0) || t_end >= 0.5 * grid.len_t())
        throw ContractError("feynman_kac_check: t_end must lie inside the time box");
    const std::size_t steps = step_count(t_end, dt);

    const GridFn2 fg = GridFn2::sample(grid, f);
    const double f_norm = l2_norm(fg);
    FeynmanKacResult res;
    GridFn2 u = GridFn2::zeros(grid);
    if (f_norm > 0.0) {
        const SolveResult sol = solve_variable(spec, fg, options.solver);
        res.relative_residual = sol.residual_l2 / f_norm;
        if (res.relative_residual > 1e-6)
            throw ContractError("feynman_kac_check: solver residual above 1e-6 relative");
        u = sol.u;
    }
    std::optional<GridFn2> u_coarse;
    if (options.grid_allowance && f_norm > 0.0) {
        const Grid2 gc = grid.coarsened();
        u_coarse = solve_variable(spec, GridFn2::sample(gc, f), options.solver).u;
    }
    auto u_at = [](const GridFn2& w, double t, double x) {
        return interpolate(w, t, x, Interp::cubic, OutOfBox::zero);
    };
    res.u0 = u_at(u, 0.0, x0);
    const double u0c = u_coarse ? u_at(*u_coarse, 0.0, x0) : res.u0;

    const StableLaw law(spec.alpha);
    const double half_box = 0.5 * grid.len_x();
    std::vector<double> lhs_c(n_paths), end_c(n_paths), lhs_f(n_paths), end_f(n_paths), end_g(n_paths);
    std::vector<char> exited(n_paths, 0);
    parallel_for(n_paths, [&](std::size_t i) {
        Rng rng = Rng::stream(master_seed, i);
        const std::vector<double> fine = draw_increments(law, 0.5 * dt, 2 * steps, rng);
        std::vector<double> coarse(steps);
        for (std::size_t k = 0; k < steps; ++k) coarse[k] = fine[2 * k] + fine[2 * k + 1];
        auto run = [&](const std::vector<double>& dz, double h, double& lhs, double& end, double* end_grid) {
            const StablePath p = simulate_path(spec, x0, h, dz);
            // Trapezoid rule in time.
            double acc = 0.0;
            double prev = f(p.times[0], p.states[0]);
            for (std::size_t k = 0; k < p.steps(); ++k) {
                const double next = std::exp(-spec.lam * p.phi[k + 1]) * f(p.times[k + 1], p.states[k + 1]);
                acc += 0.5 * h * (prev + next);
                prev = next;
            }
            lhs = acc;
            const double disc = std::exp(-spec.lam * p.phi.back());
            end = u_at(u, t_end, p.states.back()) * disc;
            if (end_grid) *end_grid = u_coarse ? u_at(*u_coarse, t_end, p.states.back()) * disc : end;
            for (double x : p.states)
                if (std::abs(x) >= half_box) exited[i] = 1;
        };
        run(coarse, dt, lhs_c[i], end_c[i], nullptr);
        run(fine, 0.5 * dt, lhs_f[i], end_f[i], &end_g[i]);
    });

    std::size_t n_exit = 0;
    for (char e : exited) n_exit += e ? 1 : 0;
    res.exit_fraction = static_cast<double>(n_exit) / static_cast<double>(n_paths);
    if (res.exit_fraction > options.max_exit_fraction) {
        std::ostringstream os;
        os << "feynman_kac_check: " << res.exit_fraction * 100.0 << "% of paths left the spatial box";
        throw RegimeError(os.str());
    }

    auto defects = [&](const std::vector<double>& lhs, const std::vector<double>& end, double u0) {
        std::vector<double> d(n_paths);
        for (std::size_t i = 0; i < n_paths; ++i) d[i] = lhs[i] + end[i] - u0;
        return mean_and_se(d);
    };
    const MeanSe dc = defects(lhs_c, end_c, res.u0);
    const MeanSe df = defects(lhs_f, end_f, res.u0);
    const MeanSe dg = defects(lhs_f, end_g, u0c);
    res.defect_coarse = dc.mean;
    res.defect_fine = df.mean;
    res.se_coarse = dc.se;
    res.se_fine = df.se;
    res.dt_allowance = std::abs(dc.mean - df.mean);
    res.grid_allowance = std::abs(dg.mean - df.mean);
    res.defect_shrinks = std::abs(df.mean) < std::abs(dc.mean);
    auto make = [&](const std::string& name, const std::vector<double>& lhs, const std::vector<double>& end,
                    const MeanSe& d, double h, double dt_error) {
        const double allowance = dt_error + res.grid_allowance;
        EstimateReport r;
        r.name = name;
        r.lhs = mean_and_se(lhs).mean;
        r.rhs = res.u0 - mean_and_se(end).mean;
        r.se = d.se;
        r.implied_constant = f_norm > 0.0 ? r.lhs / f_norm : 0.0;
        r.regime_ok = true;
        r.decide(std::abs(d.mean) <= options.se_multiplier * d.se + allowance);
        r.add("dt", h);
        r.add("t_end", t_end);
        r.add("paths", static_cast<std::uint64_t>(n_paths));
        r.add("seed", master_seed);
        r.add("defect", d.mean);
        r.add("allowance", allowance);
        r.add("u0", res.u0);
        r.add("exit_fraction", res.exit_fraction);
        return r;
    };
    // Richardson estimate for a first-order scheme: the error at dt/2 is
    // about |D(dt) - D(dt/2)|, the error at dt twice that.
    res.coarse = make("feynman_kac_dt", lhs_c, end_c, dc, dt, 2.0 * res.dt_allowance);
    res.fine = make("feynman_kac_dt_half", lhs_f, end_f, df, 0.5 * dt, res.dt_allowance);
    return res;
}

}  // namespace stablelab
