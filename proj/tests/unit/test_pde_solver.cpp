#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "stablelab/pde_solver.hpp"
#include "stablelab/presets.hpp"
#include "stablelab/problem.hpp"
#include "stablelab/stable_process.hpp"

using namespace stablelab;

namespace {

const Grid2 kGrid(64, 128, 16.0, 32.0);

GridFn2 bump(const Grid2& g) {
    return GridFn2::sample(g, [](double t, double x) { return std::exp(-t * t / 4.0 - x * x / 8.0); });
}

// u_t + L u - lam u through multipliers.
GridFn2 plain_operator(const GridFn2& u, double lam, double alpha) {
    return filter(u, [=](double tau, double omega) {
        return cplx(-0.5 * std::pow(std::abs(omega), alpha) - lam, -tau);
    });
}

ProblemSpec sine_spec(double lam = 1.0) {
    ProblemSpec s;
    s.b = Coefficient([](double, double x) { return 1.0 + 0.25 * std::sin(x); });
    s.a = Coefficient([](double t, double) { return 0.5 * std::cos(t); });
    s.mu = 0.75;
    s.nu = 1.25;
    s.K = 0.5;
    s.alpha = 1.5;
    s.lam = lam;
    return s;
}

}  // namespace

TEST(ProblemSpec, ValidatesRangesAndBounds) {
    ProblemSpec s = sine_spec();
    EXPECT_NO_THROW(s.validate());
    EXPECT_NO_THROW(s.check_bounds(kGrid));
    s.mu = 1.3;
    EXPECT_THROW(s.validate(), ContractError);
    s = sine_spec();
    s.nu = 1.2;
    EXPECT_THROW(s.check_bounds(kGrid), ContractError);
    s = sine_spec();
    s.alpha = 1.0;
    EXPECT_THROW(s.validate(), ContractError);
}

TEST(ProblemSpec, ResidualIsOperatorPlusSource) {
    const ProblemSpec s = sine_spec();
    const auto u = bump(kGrid);
    const auto f = manufactured_source(s, u);
    EXPECT_LT(residual_l2(s, u, f), 1e-13);
    EXPECT_NEAR(residual_l2(s, u, GridFn2::zeros(kGrid)), l2_norm(apply_operator(s, u)), 1e-14);
}

TEST(SolveConstant, ZeroSourceGivesZero) {
    EXPECT_EQ(solve_constant(GridFn2::zeros(kGrid), 1.0, 1.0, 1.5).max_abs(), 0.0);
}

TEST(SolveConstant, ManufacturedRoundTrip) {
    for (double alpha : {1.3, 1.5, 2.0}) {
        const auto u = bump(kGrid);
        const auto f = plain_operator(u, 0.7, alpha);
        const auto back = solve_constant(f, 0.7, 0.0, alpha, ConstantForm::plain);
        EXPECT_LT((back - u).max_abs(), 1e-10) << alpha;
    }
}

TEST(SolveConstant, EnergyInequality) {
    std::mt19937_64 rng(4);
    const Grid2 g(32, 64, 8.0, 16.0);
    for (double lam : {0.1, 1.0, 10.0}) {
        const auto f = oracle::random_field(g, rng);
        const auto u = solve_constant(f, lam, 0.0, 1.5, ConstantForm::plain);
        const auto n = norms(u, 1.5);
        const double lhs = n.l2_dt * n.l2_dt + lam * lam * n.l2 * n.l2 + n.l2_gen * n.l2_gen;
        const double ff = l2_norm(f);
        EXPECT_LE(lhs, ff * ff * (1 + 1e-8)) << lam;
    }
}

TEST(SolveVariable, ConstantCoefficientsDegenerate) {
    const double beta = 1.1;
    ProblemSpec s = make_preset(Preset::constant, beta, beta, 0.0, 1.5, 1.0);
    const auto f = bump(kGrid);
    const auto r = solve_variable(s, f, {.tol = 1e-12});
    const auto ref = solve_constant(-1.0 * f, 1.0, std::pow(beta, 1.5), 1.5);
    EXPECT_LT((r.u - ref).max_abs(), 1e-8 * ref.max_abs());
    // Independent divisor -i tau - beta^a |w|^a / 2 - lam (1 + beta^a).
    const double c = std::pow(beta, 1.5);
    const auto direct = filter(-1.0 * f, [c](double tau, double omega) {
        return 1.0 / cplx(-0.5 * c * std::pow(std::abs(omega), 1.5) - (1 + c), -tau);
    });
    EXPECT_LT((r.u - direct).max_abs(), 1e-8 * direct.max_abs());
}

TEST(SolveVariable, ZeroSource) {
    const auto r = solve_variable(sine_spec(), GridFn2::zeros(kGrid));
    EXPECT_EQ(r.u.max_abs(), 0.0);
    EXPECT_EQ(r.residual_l2, 0.0);
}

TEST(SolveVariable, ManufacturedSmoothCoefficients) {
    const ProblemSpec s = sine_spec();
    const auto ustar = bump(kGrid);
    const auto f = manufactured_source(s, ustar);
    const auto r = solve_variable(s, f, {.tol = 1e-10});
    EXPECT_LT(r.residual_l2, 1e-10 * l2_norm(f));
    EXPECT_LT(l2_norm(r.u - ustar) / l2_norm(ustar), 1e-6);
    EXPECT_LE(r.iterations, 200u);
    ASSERT_FALSE(r.homotopy_path.empty());
    EXPECT_EQ(r.homotopy_path.back().s, 1.0);
    EXPECT_EQ(r.homotopy_path.back().step, 2);
}

TEST(SolveVariable, DiscontinuousDiffusionStableUnderRefinement) {
    const ProblemSpec s = make_preset(Preset::step_b, 0.8, 1.2, 0.0, 1.5, 1.0);
    auto implied = [&](const Grid2& g) {
        const auto f = bump(g);
        const auto r = solve_variable(s, f);
        EXPECT_LT(r.residual_l2, 1e-8 * l2_norm(f));
        return norms(r.u, s.alpha).h / l2_norm(f);
    };
    const double m1 = implied(kGrid), m2 = implied(kGrid.refined());
    EXPECT_TRUE(std::isfinite(m1));
    EXPECT_NEAR(m2 / m1, 1.0, 0.1);
}

TEST(SolveVariable, RejectsSmallLambda) {
    const ProblemSpec s = make_preset(Preset::smooth_sine, 1.0, 1.0, 1.0, 1.5, 0.5);
    try {
        solve_variable(s, bump(kGrid));
        FAIL() << "expected PreconditionError";
    } catch (const PreconditionError& e) {
        EXPECT_NEAR(e.delta, 0.5 * std::pow(2.0 / 1.5, 3.0), 1e-9);
        EXPECT_GT(e.lambda0, 0.0);
    }
}

TEST(SolveVariable, DivergenceCarriesHistory) {
    const ProblemSpec s = sine_spec();
    SolverOptions o;
    o.tol = 1e-14;
    o.stage_tol = 1e-14;
    o.max_iter = 3;
    try {
        solve_variable(s, bump(kGrid), o);
        FAIL() << "expected DivergenceError";
    } catch (const DivergenceError& e) {
        EXPECT_FALSE(e.residual_history.empty());
    }
}
