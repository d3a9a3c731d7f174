#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "stablelab/errors.hpp"
#include "stablelab/presets.hpp"

namespace stablelab {

enum class Experiment {
    symbol_check,
    solve_manufactured,
    apriori_battery,
    krylov_battery,
    feynman_kac,
    local_krylov,
    convergence_study,
    constants,
};

std::string experiment_name(Experiment e);
std::vector<Experiment> all_experiments();

/// One CLI run. Read from flat key=value text; '#' starts a comment.
///
/// Keys: experiment, alpha, lam, mu, nu, K, coefficient_preset, n_t, n_x,
/// len_t, len_x, n_paths, dt, horizon, x0, seed, out_path, m, m_cal, tol,
/// n_list (comma separated), resamples.
struct ExperimentConfig {
    Experiment experiment = Experiment::constants;
    double alpha = 1.5;
    double lam = 1.0;
    double mu = 1.0;
    double nu = 1.0;
    double K = 0.0;
    Preset coefficient_preset = Preset::constant;
    std::size_t n_t = 64;
    std::size_t n_x = 256;
    double len_t = 32.0;
    double len_x = 64.0;
    std::size_t n_paths = 10000;
    double dt = 0.01;
    double horizon = 1.0;
    double x0 = 0.0;
    std::uint64_t seed = 1;
    std::string out_path = "out";
    /// Localisation radius for local_krylov.
    double m = 2.0;
    /// Calibrated Krylov constant; inf disables the bound.
    double m_cal = std::numeric_limits<double>::infinity();
    double tol = 1e-8;
    std::vector<int> n_list{4, 16, 64, 256};
    std::size_t resamples = 500;
};

/// Carries one diagnostic per offending field.
class ValidationError : public ContractError {
public:
    explicit ValidationError(std::vector<std::string> diagnostics);
    std::vector<std::string> diagnostics;
};

/// Parses the text; unknown keys, duplicates and malformed values are
/// reported together. Does not run validate().
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Field diagnostics; empty when the config is usable.
std::vector<std::string> validate(const ExperimentConfig& cfg);

/// Throws ValidationError if validate() reports anything.
void require_valid(const ExperimentConfig& cfg);

/// key=value lines in a fixed order.
std::string echo_config(const ExperimentConfig& cfg);

}  // namespace stablelab
