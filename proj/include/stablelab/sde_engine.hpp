#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stablelab/problem.hpp"
#include "stablelab/rng.hpp"
#include "stablelab/stable_process.hpp"

namespace stablelab {

/// Euler path of dX = b(t, X_{t-}) dZ + a(t, X) dt on the times k*dt.
struct StablePath {
    std::vector<double> times;
    std::vector<double> states;
    /// Driving increments Z_{t_{k+1}} - Z_{t_k}.
    std::vector<double> increments;
    /// phi_t = int_0^t (1 + |b(s, X_s)|^alpha) ds, left-endpoint sums.
    std::vector<double> phi;

    std::size_t steps() const { return increments.size(); }
};

/// Number of steps of size dt covering [0, horizon]; horizon must be an
/// integer multiple of dt up to 1e-9 relative.
std::size_t step_count(double horizon, double dt);

/// n i.i.d. increments over dt, two uniforms each.
std::vector<double> draw_increments(const StableLaw& law, double dt, std::size_t n, Rng& rng);

/// X_{k+1} = X_k + b(t_k, X_k) dZ_k + a(t_k, X_k) dt. Throws BlowUpError if
/// |X| exceeds 1e12.
StablePath simulate_path(const ProblemSpec& spec, double x0, double dt, std::span<const double> increments);

/// Draws the increments from rng. With noise == false the increments are
/// drawn (so the stream advances identically) but replaced by zero.
StablePath simulate_path(const ProblemSpec& spec, double x0, double horizon, double dt, Rng& rng,
                         bool noise = true);

/// First grid time with |X| > m.
std::optional<double> stopping_time_tau_m(const StablePath& path, double m);

/// Index form of stopping_time_tau_m.
std::optional<std::size_t> stopping_index(const StablePath& path, double m);

/// Base coefficients and the mollification radius 1/n of one member.
struct CoefficientFamily {
    ProblemSpec base;
    int n = 1;

    double eps() const { return 1.0 / n; }
    /// The problem with a, b replaced by their eps-mollifications.
    ProblemSpec member() const;
};

ProblemSpec mollified_family(const ProblemSpec& base, int n);

struct ConvergenceRow {
    int n_from = 0;
    int n_to = 0;
    double w1 = 0.0;
    /// 95% percentile bootstrap interval.
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

struct ConvergenceTable {
    std::vector<int> n_list;
    std::size_t paths = 0;
    std::size_t resamples = 0;
    /// Distances between consecutive members.
    std::vector<ConvergenceRow> rows;
    /// 95% bootstrap interval of w1[i] - w1[i+1] (paired resamples).
    std::vector<std::pair<double, double>> drop_ci;
    /// Every drop interval lies above zero.
    bool decreasing = false;
};

/// Wasserstein-1 distance between two equal-size samples (sorted copies).
double wasserstein1(std::vector<double> a, std::vector<double> b);

/// Simulates X^n at horizon for each n with common driving increments
/// (path i uses stream (master_seed, i) for every n) and reports the
/// distances between consecutive laws with bootstrap intervals.
ConvergenceTable convergence_experiment(const ProblemSpec& base, double x0, double horizon, double dt,
                                        const std::vector<int>& n_list, std::size_t paths_per_n,
                                        std::uint64_t master_seed, std::size_t resamples = 500);

}  // namespace stablelab
