#include "stablelab/experiments.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "stablelab/apriori.hpp"
#include "stablelab/constants.hpp"
#include "stablelab/krylov.hpp"
#include "stablelab/parallel.hpp"
#include "stablelab/pde_solver.hpp"
#include "stablelab/presets.hpp"
#include "stablelab/sde_engine.hpp"
#include "stablelab/stable_process.hpp"

namespace stablelab {

namespace {

using Reports = std::vector<EstimateReport>;

ProblemSpec spec_of(const ExperimentConfig& c) {
    return make_preset(c.coefficient_preset, c.mu, c.nu, c.K, c.alpha, c.lam);
}

Grid2 grid_of(const ExperimentConfig& c) { return Grid2(c.n_t, c.n_x, c.len_t, c.len_x); }

EstimateReport bound_row(const std::string& name, double lhs, double rhs) {
    EstimateReport r;
    r.name = name;
    r.lhs = lhs;
    r.rhs = rhs;
    r.implied_constant = rhs > 0.0 ? lhs / rhs : 0.0;
    r.decide(lhs <= rhs);
    return r;
}

struct Gaussian {
    double t0, x0, st, sx;
    double operator()(double t, double x) const {
        const double a = (t - t0) / st;
        const double b = (x - x0) / sx;
        return std::exp(-0.5 * (a * a + b * b));
    }
};

Reports symbol_check(const ExperimentConfig& c) {
    Reports out;
    const Grid2 line(1, c.n_x, 1.0, c.len_x);
    const GridFn2 g = GridFn2::sample(line, [](double, double x) { return std::exp(-0.5 * x * x); });
    const GridFn2 lg = apply_generator_spectral(g, c.alpha);
    const GeneratorQuadratureEvaluator eval(GeneratorQuadrature::calibrated(c.alpha), c.alpha);
    const std::size_t lo = c.n_x / 4;
    const std::size_t span = c.n_x / 2;
    const std::size_t stride = std::max<std::size_t>(1, span / 128);
    std::vector<std::size_t> ks;
    for (std::size_t k = lo; k < lo + span; k += stride) ks.push_back(k);
    std::vector<double> diff(ks.size());
    std::vector<double> ref(ks.size());
    parallel_for(ks.size(), [&](std::size_t i) {
        auto gf = [](double x) { return std::exp(-0.5 * x * x); };
        const double q = eval(gf, line.x_at(ks[i]));
        ref[i] = std::abs(lg(0, ks[i]).real());
        diff[i] = std::abs(q - lg(0, ks[i]).real());
    });
    double md = 0.0;
    double mr = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        md = std::max(md, diff[i]);
        mr = std::max(mr, ref[i]);
    }
    EstimateReport r = bound_row("symbol_quadrature", md / mr, 1e-3);
    r.add("alpha", c.alpha);
    r.add("points", static_cast<std::uint64_t>(ks.size()));
    out.push_back(r);

    // alpha = 2 against half the central second difference of the exact function.
    const double w1 = 2.0 * std::numbers::pi * 3.0 / c.len_x;
    const double w2 = 2.0 * std::numbers::pi * 5.0 / c.len_x;
    auto h = [w1, w2](double x) { return std::cos(w1 * x) + 0.5 * std::sin(w2 * x); };
    const GridFn2 hg = GridFn2::sample(line, [&](double, double x) { return h(x); });
    const GridFn2 lh = apply_generator_spectral(hg, 2.0);
    const double step = 1e-3;
    double md2 = 0.0;
    double mr2 = 0.0;
    for (std::size_t k = 0; k < c.n_x; ++k) {
        const double x = line.x_at(k);
        const double fd = 0.5 * (h(x + step) - 2.0 * h(x) + h(x - step)) / (step * step);
        md2 = std::max(md2, std::abs(fd - lh(0, k).real()));
        mr2 = std::max(mr2, std::abs(lh(0, k).real()));
    }
    out.push_back(bound_row("gaussian_reduction", md2 / mr2, 1e-6));
    return out;
}

Reports solve_manufactured(const ExperimentConfig& c) {
    const ProblemSpec spec = spec_of(c);
    const Grid2 grid = grid_of(c);
    const GridFn2 exact = GridFn2::sample(grid, Gaussian{0.0, 0.0, std::sqrt(2.0), 2.0});
    const GridFn2 f = manufactured_source(spec, exact);
    SolverOptions opt;
    opt.tol = c.tol;
    const SolveResult sol = solve_variable(spec, f, opt);
    Reports out;
    const double fn = l2_norm(f);
    out.push_back(bound_row("manufactured_residual", sol.residual_l2 / fn, c.tol));
    out.push_back(bound_row("manufactured_error", l2_norm(sol.u - exact) / l2_norm(exact), 1e-6));
    out.push_back(bound_row("homotopy_iterations", static_cast<double>(sol.iterations), 200.0));
    for (auto& r : out) {
        r.add("preset", preset_name(c.coefficient_preset));
        r.add("lam", c.lam);
    }
    return out;
}

Reports apriori_battery(const ExperimentConfig& c) {
    const ProblemSpec spec = spec_of(c);
    const Grid2 grid = grid_of(c);
    const std::vector<Gaussian> sources{
        {0.0, 0.0, 1.0, 1.0}, {1.0, -2.0, 0.7, 1.5}, {-2.0, 3.0, 1.5, 0.8}, {2.0, 1.0, 0.5, 0.5}};
    SolverOptions opt;
    opt.tol = c.tol;
    Reports out;
    for (std::size_t i = 0; i < sources.size(); ++i) {
        const GridFn2 f = GridFn2::sample(grid, sources[i]);
        const SolveResult sol = solve_variable(spec, f, opt);
        for (SupNormConstant k : {SupNormConstant::literal, SupNormConstant::consistent}) {
            AprioriOptions ao;
            ao.constant = k;
            EstimateReport r = apriori_report(spec, sol.u, f, ao);
            r.name += "_" + std::to_string(i);
            out.push_back(r);
        }
    }
    return out;
}

double relative_change(double a, double b) { return std::abs(b / a - 1.0); }

Reports krylov_battery(const ExperimentConfig& c) {
    const ProblemSpec spec = spec_of(c);
    Reports out;
    struct Level {
        Grid2 grid;
        double dt;
        std::string suffix;
    };
    const Grid2 g0 = grid_of(c);
    const std::vector<Level> levels{{g0, c.dt, ""}, {g0.refined(), 0.5 * c.dt, "_refined"}};
    std::vector<std::vector<double>> constants(levels.size());
    std::size_t disc_violations = 0;
    std::size_t stop_violations = 0;
    double scale_gap = 0.0;
    for (std::size_t l = 0; l < levels.size(); ++l) {
        const auto& lv = levels[l];
        const auto battery = krylov_f_battery(lv.grid);
        std::vector<SourceFn> sources;
        std::vector<GridFn2> fields;
        for (const auto& b : battery) {
            fields.push_back(GridFn2::sample(lv.grid, b));
            check_krylov_regime(spec, fields.back(), c.horizon, c.lam, true);
            sources.push_back(b);
        }
        // Doubled copies for the scaling check.
        for (const auto& b : battery) {
            BumpSource d = b;
            d.scale *= 2.0;
            sources.push_back(d);
        }
        const std::size_t nf = battery.size();
        const auto occ =
            occupation_battery(spec, sources, c.x0, c.horizon, lv.dt, c.n_paths, c.seed, c.horizon, c.m);
        for (std::size_t s = 0; s < nf; ++s) {
            std::vector<double> und(c.n_paths), dis(c.n_paths), stp(c.n_paths), und2(c.n_paths);
            for (std::size_t i = 0; i < c.n_paths; ++i) {
                und[i] = occ[s][i].undiscounted;
                dis[i] = occ[s][i].discounted;
                stp[i] = occ[s][i].stopped;
                und2[i] = occ[s + nf][i].undiscounted;
                if (dis[i] > und[i]) ++disc_violations;
                if (stp[i] > und[i]) ++stop_violations;
            }
            const double norm = l2_norm(fields[s]);
            const double wnorm = windowed_l2(fields[s], c.horizon, c.m);
            const std::string id = std::to_string(s);
            struct Row {
                std::string name;
                std::vector<double>* v;
                double norm;
            };
            for (const Row& row : {Row{"krylov_", &und, norm}, Row{"krylov_discounted_", &dis, norm},
                                   Row{"local_krylov_", &stp, wnorm}}) {
                const MeanSe ms = mean_and_se(*row.v);
                EstimateReport r;
                r.name = row.name + id + lv.suffix;
                r.lhs = ms.mean;
                r.se = ms.se;
                r.rhs = c.m_cal * row.norm;
                r.implied_constant = ms.mean / row.norm;
                r.decide(std::isfinite(r.implied_constant) && r.lhs <= r.rhs);
                r.add("dt", lv.dt);
                r.add("n_t", static_cast<std::uint64_t>(lv.grid.n_t()));
                r.add("n_x", static_cast<std::uint64_t>(lv.grid.n_x()));
                r.add("f_norm", row.norm);
                constants[l].push_back(r.implied_constant);
                out.push_back(r);
            }
            const double c1 = mean_and_se(und).mean / norm;
            const double c2 = mean_and_se(und2).mean / (2.0 * norm);
            scale_gap = std::max(scale_gap, std::abs(c2 - c1));
        }
    }
    double drift = 0.0;
    for (std::size_t i = 0; i < constants[0].size(); ++i)
        drift = std::max(drift, relative_change(constants[0][i], constants[1][i]));
    out.push_back(bound_row("krylov_refinement_stability", drift, 0.2));
    out.push_back(bound_row("krylov_scale_free", scale_gap, 0.0));
    out.push_back(bound_row("discounted_le_undiscounted", static_cast<double>(disc_violations), 0.0));
    out.push_back(bound_row("stopped_le_unstopped", static_cast<double>(stop_violations), 0.0));
    return out;
}

Reports feynman_kac(const ExperimentConfig& c) {
    const ProblemSpec spec = spec_of(c);
    const Gaussian src{0.75, c.x0, 0.4, 1.0};
    FeynmanKacOptions opt;
    opt.solver.tol = c.tol;
    const FeynmanKacResult res =
        feynman_kac_check(spec, grid_of(c), src, c.x0, c.horizon, c.dt, c.n_paths, c.seed, opt);
    Reports out{res.coarse, res.fine};
    EstimateReport s;
    s.name = "feynman_kac_defect_shrinks";
    s.lhs = std::abs(res.defect_fine);
    s.rhs = std::abs(res.defect_coarse);
    s.se = res.se_fine;
    s.implied_constant = s.rhs > 0.0 ? s.lhs / s.rhs : 0.0;
    s.decide(res.defect_shrinks);
    out.push_back(s);
    return out;
}

Reports local_krylov_experiment(const ExperimentConfig& c) {
    const ProblemSpec spec = spec_of(c);
    const Grid2 grid = grid_of(c);
    const auto battery = krylov_f_battery(grid);
    Reports out;
    for (std::size_t i = 0; i < battery.size(); ++i) {
        KrylovOptions ko;
        ko.m_cal = c.m_cal;
        ko.exact = battery[i];
        EstimateReport r = local_krylov(spec, GridFn2::sample(grid, battery[i]), c.x0, c.horizon, c.m, c.dt,
                                        c.n_paths, c.seed, ko);
        r.name += "_" + std::to_string(i);
        out.push_back(r);
    }
    return out;
}

Reports convergence_study(const ExperimentConfig& c) {
    const ConvergenceTable t =
        convergence_experiment(spec_of(c), c.x0, c.horizon, c.dt, c.n_list, c.n_paths, c.seed, c.resamples);
    Reports out;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        EstimateReport r;
        r.name = "w1_n" + std::to_string(row.n_from) + "_n" + std::to_string(row.n_to);
        r.lhs = row.w1;
        r.se = (row.ci_hi - row.ci_lo) / (2.0 * 1.959963984540054);
        r.rhs = i == 0 ? std::numeric_limits<double>::infinity() : t.rows[i - 1].w1;
        r.implied_constant = std::isfinite(r.rhs) ? r.lhs / r.rhs : 0.0;
        r.decide(i == 0 || t.drop_ci[i - 1].first > 0.0);
        r.add("ci_lo", row.ci_lo);
        r.add("ci_hi", row.ci_hi);
        if (i > 0) {
            r.add("drop_ci_lo", t.drop_ci[i - 1].first);
            r.add("drop_ci_hi", t.drop_ci[i - 1].second);
        }
        out.push_back(r);
    }
    EstimateReport d = bound_row("convergence_decreasing", t.decreasing ? 0.0 : 1.0, 0.0);
    d.add("resamples", static_cast<std::uint64_t>(t.resamples));
    out.push_back(d);
    return out;
}

Reports constants(const ExperimentConfig& c) {
    ProblemSpec spec = spec_of(c);
    const double m2 = drift_absorption_constant(spec);
    auto row = [](const std::string& name, double numeric, double closed) {
        EstimateReport r;
        r.name = name;
        r.lhs = numeric;
        r.rhs = closed;
        r.implied_constant = closed != 0.0 ? numeric / closed : 0.0;
        r.decide(std::abs(numeric - closed) <= 1e-6 * std::max(1.0, std::abs(closed)));
        return r;
    };
    Reports out;
    out.push_back(row("delta", delta_threshold(c.mu, c.K, c.alpha), delta_closed_form(c.mu, c.K, c.alpha)));
    out.push_back(row("lambda0", lambda0_threshold(m2, c.alpha), lambda0_closed_form(m2, c.alpha)));
    out.push_back(row("m1", m1_constant(c.lam, c.alpha), m1_closed_form(c.lam, c.alpha)));
    out[1].add("M2", m2);
    return out;
}

Reports dispatch(const ExperimentConfig& c) {
    switch (c.experiment) {
        case Experiment::symbol_check: return symbol_check(c);
        case Experiment::solve_manufactured: return solve_manufactured(c);
        case Experiment::apriori_battery: return apriori_battery(c);
        case Experiment::krylov_battery: return krylov_battery(c);
        case Experiment::feynman_kac: return feynman_kac(c);
        case Experiment::local_krylov: return local_krylov_experiment(c);
        case Experiment::convergence_study: return convergence_study(c);
        case Experiment::constants: return constants(c);
    }
    throw InvariantError("unknown experiment");
}

void write_atomic(const std::filesystem::path& path, const std::string& text) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot write " + tmp.string());
        f << text;
        f.flush();
        if (!f) throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

RunRecord run(const ExperimentConfig& cfg) {
    require_valid(cfg);
    RunRecord rec;
    rec.config = cfg;
    const auto start = std::chrono::steady_clock::now();
    try {
        rec.reports = dispatch(cfg);
    } catch (const RegimeError& e) {
        EstimateReport r;
        r.name = experiment_name(cfg.experiment);
        r.lhs = std::numeric_limits<double>::quiet_NaN();
        r.rhs = std::numeric_limits<double>::quiet_NaN();
        r.implied_constant = std::numeric_limits<double>::quiet_NaN();
        r.regime_ok = false;
        r.pass = false;
        r.add("error", std::string(e.what()));
        rec.reports = {r};
        rec.regime_error = e.what();
    }
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

std::string record_text(const RunRecord& r) {
    std::ostringstream os;
    os << "version=" << r.version << '\n' << echo_config(r.config);
    os << "wall_time_s=" << format_double(r.wall_seconds) << '\n';
    os << "threads=" << thread_count() << '\n';
    if (r.regime_error) os << "regime_error=" << *r.regime_error << '\n';
    os << "reports=" << r.reports.size() << '\n';
    for (std::size_t i = 0; i < r.reports.size(); ++i) {
        const auto& e = r.reports[i];
        const std::string p = "report." + std::to_string(i) + ".";
        os << p << "name=" << e.name << '\n'
           << p << "lhs=" << format_double(e.lhs) << '\n'
           << p << "se=" << (e.se ? format_double(*e.se) : std::string()) << '\n'
           << p << "rhs=" << format_double(e.rhs) << '\n'
           << p << "implied_constant=" << format_double(e.implied_constant) << '\n'
           << p << "regime_ok=" << (e.regime_ok ? "true" : "false") << '\n'
           << p << "pass=" << (e.pass ? "true" : "false") << '\n';
        for (const auto& [k, v] : e.meta) os << p << "meta." << k << '=' << v << '\n';
    }
    return os.str();
}

std::string reports_csv(const RunRecord& r) {
    std::string s = csv_header() + '\n';
    for (const auto& e : r.reports) s += csv_row(e) + '\n';
    return s;
}

void write_run(const RunRecord& r, const std::string& dir) {
    const std::filesystem::path d(dir);
    std::filesystem::create_directories(d);
    // Render both files before touching the disk so a failure writes nothing.
    const std::string csv = reports_csv(r);
    const std::string rec = record_text(r);
    write_atomic(d / "reports.csv", csv);
    write_atomic(d / "record.txt", rec);
}

}  // namespace stablelab
