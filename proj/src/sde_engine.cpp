#include "stablelab/sde_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "stablelab/mollifier.hpp"
#include "stablelab/parallel.hpp"

namespace stablelab {

std::size_t step_count(double horizon, double dt) {
    if (!(dt > 0.0) || !(horizon > 0.0) || dt > horizon * (1.0 + 1e-12))
        throw ContractError("simulate_path: need 0 < dt <= horizon");
    const double r = horizon / dt;
    const double n = std::round(r);
    if (std::abs(r - n) > 1e-9 * r)
        throw ContractError("simulate_path: horizon must be a multiple of dt");
    return static_cast<std::size_t>(n);
}

std::vector<double> draw_increments(const StableLaw& law, double dt, std::size_t n, Rng& rng) {
    std::vector<double> dz(n);
    for (auto& z : dz) z = sample_increment(law, dt, rng);
    return dz;
}

StablePath simulate_path(const ProblemSpec& spec, double x0, double dt, std::span<const double> increments) {
    if (!(dt > 0.0)) throw ContractError("simulate_path: dt must be positive");
    const std::size_t n = increments.size();
    StablePath p;
    p.times.resize(n + 1);
    p.states.resize(n + 1);
    p.phi.resize(n + 1);
    p.increments.assign(increments.begin(), increments.end());
    p.times[0] = 0.0;
    p.states[0] = x0;
    p.phi[0] = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double x = p.states[k];
        const double b = spec.b(t, x);
        const double next = x + b * increments[k] + spec.a(t, x) * dt;
        if (!(std::abs(next) <= 1e12))
            throw BlowUpError("simulate_path: |X| exceeded 1e12 at step " + std::to_string(k + 1), k + 1);
        p.states[k + 1] = next;
        p.times[k + 1] = static_cast<double>(k + 1) * dt;
        p.phi[k + 1] = p.phi[k] + (1.0 + std::pow(std::abs(b), spec.alpha)) * dt;
    }
    return p;
}

StablePath simulate_path(const ProblemSpec& spec, double x0, double horizon, double dt, Rng& rng,
                         bool noise) {
    spec.validate();
    const std::size_t n = step_count(horizon, dt);
    std::vector<double> dz = draw_increments(StableLaw(spec.alpha), dt, n, rng);
    if (!noise) std::fill(dz.begin(), dz.end(), 0.0);
    return simulate_path(spec, x0, dt, dz);
}

std::optional<std::size_t> stopping_index(const StablePath& path, double m) {
    for (std::size_t k = 0; k < path.states.size(); ++k)
        if (std::abs(path.states[k]) > m) return k;
    return std::nullopt;
}

std::optional<double> stopping_time_tau_m(const StablePath& path, double m) {
    if (!(m > 0.0)) throw ContractError("stopping_time_tau_m: m must be positive");
    const auto k = stopping_index(path, m);
    if (!k) return std::nullopt;
    return path.times[*k];
}

ProblemSpec CoefficientFamily::member() const {
    if (n < 1) throw ContractError("mollified_family: n must be at least 1");
    ProblemSpec s = base;
    s.a = mollified(base.a, eps());
    s.b = mollified(base.b, eps());
    return s;
}

ProblemSpec mollified_family(const ProblemSpec& base, int n) { return CoefficientFamily{base, n}.member(); }

double wasserstein1(std::vector<double> a, std::vector<double> b) {
    if (a.size() != b.size() || a.empty())
        throw ContractError("wasserstein1: samples must be non-empty and of equal size");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = std::abs(a[i] - b[i]);
    return compensated_sum(d) / static_cast<double>(d.size());
}

namespace {

std::pair<double, double> percentile_interval(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    auto at = [&](double q) {
        const double pos = q * static_cast<double>(v.size() - 1);
        const std::size_t i = static_cast<std::size_t>(pos);
        const double r = pos - static_cast<double>(i);
        return i + 1 < v.size() ? v[i] * (1.0 - r) + v[i + 1] * r : v[i];
    };
    return {at(0.025), at(0.975)};
}

}  // namespace

ConvergenceTable convergence_experiment(const ProblemSpec& base, double x0, double horizon, double dt,
                                        const std::vector<int>& n_list, std::size_t paths_per_n,
                                        std::uint64_t master_seed, std::size_t resamples) {
    if (n_list.size() < 2) throw ContractError("convergence_experiment: need at least two n values");
    for (std::size_t i = 0; i < n_list.size(); ++i)
        if (n_list[i] < 1 || (i > 0 && n_list[i] <= n_list[i - 1]))
            throw ContractError("convergence_experiment: n_list must be positive and increasing");
    if (paths_per_n < 2 || resamples < 2)
        throw ContractError("convergence_experiment: need at least two paths and two resamples");
    base.validate();
    const std::size_t steps = step_count(horizon, dt);
    const StableLaw law(base.alpha);

    std::vector<ProblemSpec> members;
    for (int n : n_list) members.push_back(mollified_family(base, n));
    const std::size_t m = members.size();
    std::vector<std::vector<double>> endpoint(m, std::vector<double>(paths_per_n));
    parallel_for(paths_per_n, [&](std::size_t i) {
        Rng rng = Rng::stream(master_seed, i);
        const std::vector<double> dz = draw_increments(law, dt, steps, rng);
        for (std::size_t j = 0; j < m; ++j) endpoint[j][i] = simulate_path(members[j], x0, dt, dz).states.back();
    });

    ConvergenceTable table;
    table.n_list = n_list;
    table.paths = paths_per_n;
    table.resamples = resamples;
    for (std::size_t j = 0; j + 1 < m; ++j)
        table.rows.push_back({n_list[j], n_list[j + 1], wasserstein1(endpoint[j], endpoint[j + 1]), 0.0, 0.0});

    // Resample path indices jointly so every distance sees the same draw.
    std::vector<std::vector<double>> boot(m - 1, std::vector<double>(resamples));
    parallel_for(resamples, [&](std::size_t r) {
        Rng rng = Rng::stream(master_seed ^ 0xb0075ea9b1e5ULL, r);
        std::vector<std::size_t> idx(paths_per_n);
        for (auto& i : idx) i = static_cast<std::size_t>(rng.next_u64() % paths_per_n);
        std::vector<double> a(paths_per_n);
        std::vector<double> b(paths_per_n);
        for (std::size_t j = 0; j + 1 < m; ++j) {
            for (std::size_t i = 0; i < paths_per_n; ++i) {
                a[i] = endpoint[j][idx[i]];
                b[i] = endpoint[j + 1][idx[i]];
            }
            boot[j][r] = wasserstein1(a, b);
        }
    });
    for (std::size_t j = 0; j + 1 < m; ++j)
        std::tie(table.rows[j].ci_lo, table.rows[j].ci_hi) = percentile_interval(boot[j]);
    table.decreasing = true;
    for (std::size_t j = 0; j + 2 < m; ++j) {
        std::vector<double> drop(resamples);
        for (std::size_t r = 0; r < resamples; ++r) drop[r] = boot[j][r] - boot[j + 1][r];
        table.drop_ci.push_back(percentile_interval(drop));
        table.decreasing = table.decreasing && table.drop_ci.back().first > 0.0;
    }
    return table;
}

}  // namespace stablelab
