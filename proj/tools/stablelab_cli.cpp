#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "stablelab/config.hpp"
#include "stablelab/errors.hpp"
#include "stablelab/experiments.hpp"

namespace {

constexpr int kValidation = 2;
constexpr int kRegime = 3;
constexpr int kInvariant = 4;

int run_command(const std::string& config_path, const std::optional<std::uint64_t>& seed,
                const std::optional<std::string>& out) {
    stablelab::ExperimentConfig cfg = stablelab::load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (out) cfg.out_path = *out;
    const stablelab::RunRecord rec = stablelab::run(cfg);
    stablelab::write_run(rec, cfg.out_path);
    std::cout << stablelab::reports_csv(rec);
    if (rec.regime_error) {
        std::cerr << "out of regime: " << *rec.regime_error << '\n';
        return kRegime;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stable-process PDE and Monte Carlo laboratory"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run one experiment from a config file");
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    run->add_option("--config", config_path, "Config file (key=value lines)")->required();
    run->add_option("--seed", seed, "Override the master seed");
    run->add_option("--out", out, "Override the output directory");

    auto* list = app.add_subcommand("list-experiments", "Print the experiment names");

    auto* validate = app.add_subcommand("validate", "Check a config file without running it");
    std::string validate_path;
    validate->add_option("--config", validate_path, "Config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kValidation;
    }

    try {
        if (*list) {
            for (auto e : stablelab::all_experiments()) std::cout << stablelab::experiment_name(e) << '\n';
            return 0;
        }
        if (*validate) {
            stablelab::require_valid(stablelab::load_config(validate_path));
            std::cout << "ok\n";
            return 0;
        }
        return run_command(config_path, seed, out);
    } catch (const stablelab::ValidationError& e) {
        std::cerr << e.what() << '\n';
        return kValidation;
    } catch (const stablelab::PreconditionError& e) {
        std::cerr << "lam: " << e.what() << '\n';
        return kValidation;
    } catch (const stablelab::RegimeError& e) {
        std::cerr << "out of regime: " << e.what() << '\n';
        return kRegime;
    } catch (const stablelab::InvariantError& e) {
        std::cerr << "internal invariant violated: " << e.what() << '\n';
        return kInvariant;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
