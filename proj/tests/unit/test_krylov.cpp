#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "stablelab/krylov.hpp"
#include "stablelab/mollifier.hpp"
#include "stablelab/parallel.hpp"
#include "stablelab/presets.hpp"

using namespace stablelab;

namespace {

const Grid2 kGrid(256, 256, 32.0, 32.0);

ProblemSpec brownian(double lam = 1.0) { return make_preset(Preset::constant, 1.0, 1.0, 0.0, 2.0, lam); }

ProblemSpec shifted(const ProblemSpec& s, double c) {
    ProblemSpec out = s;
    auto b = s.b.value, a = s.a.value;
    out.b = Coefficient([b, c](double t, double x) { return b(t, x - c); });
    out.a = Coefficient([a, c](double t, double x) { return a(t, x - c); });
    return out;
}

}  // namespace

TEST(Occupation, PathwiseOrderAndLinearity) {
    const ProblemSpec s = make_preset(Preset::step_b, 0.8, 1.2, 0.3, 1.5, 1.0);
    const BumpSource f{2.0, 0.0, 2.0, 2.0};
    BumpSource f2 = f;
    f2.scale = 2.0;
    for (std::uint64_t i = 0; i < 200; ++i) {
        Rng rng = Rng::stream(4, i);
        const auto p = simulate_path(s, 0.0, 4.0, 0.02, rng);
        const auto o = occupation_integrals(p, f, 1.0, 3.0, 1.5);
        const auto o2 = occupation_integrals(p, f2, 1.0, 3.0, 1.5);
        EXPECT_LE(o.discounted, o.undiscounted);
        EXPECT_LE(o.stopped, o.undiscounted);
        EXPECT_EQ(o2.undiscounted, 2.0 * o.undiscounted);
        EXPECT_EQ(o2.discounted, 2.0 * o.discounted);
        const auto z = occupation_integrals(p, [](double, double) { return 0.0; }, 1.0, 3.0, 1.5);
        EXPECT_EQ(z.undiscounted, 0.0);
    }
}

TEST(Battery, UnitNormsAndSupport) {
    const auto battery = krylov_f_battery(kGrid);
    ASSERT_EQ(battery.size(), 6u);
    for (const auto& b : battery) {
        const auto f = GridFn2::sample(kGrid, b);
        EXPECT_NEAR(l2_norm(f), 1.0, 1e-12);
        EXPECT_EQ(b(0.49, b.x0), 0.0);
        EXPECT_EQ(b(8.51, b.x0), 0.0);
    }
}

TEST(Krylov, ZeroSource) {
    const auto r = krylov_functional(brownian(), GridFn2::zeros(kGrid), 0.0, 8.0, 0.02, 1000, 1.0, true, 1);
    EXPECT_EQ(r.lhs, 0.0);
    ASSERT_TRUE(r.se.has_value());
}

TEST(Krylov, RejectsNegativeSource) {
    const auto f = GridFn2::sample(kGrid, [](double t, double x) { return -std::exp(-(t - 2) * (t - 2) - x * x); });
    EXPECT_THROW(krylov_functional(brownian(), f, 0.0, 8.0, 0.02, 100, 1.0, true, 1), ContractError);
}

TEST(Krylov, RegimeChecks) {
    const auto flat = GridFn2::sample(kGrid, [](double t, double) { return std::exp(-(t - 2) * (t - 2)); });
    EXPECT_THROW(check_krylov_regime(brownian(), flat, 8.0, 1.0, true), RegimeError);
    const auto late = GridFn2::sample(kGrid, [](double t, double x) { return std::exp(-(t - 9) * (t - 9) - x * x); });
    EXPECT_THROW(check_krylov_regime(brownian(), late, 8.0, 1.0, true), RegimeError);
    const auto ok = GridFn2::sample(kGrid, [](double t, double x) { return std::exp(-4 * (t - 3) * (t - 3) - x * x); });
    EXPECT_NO_THROW(check_krylov_regime(brownian(), ok, 8.0, 1.0, true));
    EXPECT_THROW(check_krylov_regime(brownian(0.5), ok, 8.0, 0.5, true), RegimeError);
}

TEST(Krylov, BrownianResolventOracle) {
    const oracle::GaussSource g{2.0, 0.4, 0.5, 1.0};
    const auto f = GridFn2::sample(kGrid, g);
    KrylovOptions o;
    o.exact = g;
    const auto r = krylov_functional(brownian(), f, 0.0, 8.0, 0.01, 40000, 1.0, true, 3, o);
    const double ref = oracle::heat_resolvent_path(g, 0.0, 8.0, 2.0);
    EXPECT_LT(std::abs(r.lhs - ref), 3.0 * *r.se) << r.lhs << " vs " << ref;
}

TEST(Krylov, TranslationCovariance) {
    const ProblemSpec s = make_preset(Preset::smooth_sine, 0.8, 1.2, 0.3, 1.5, 1.0);
    const double c = 1.25;
    const BumpSource f{3.0, 0.0, 3.0, 2.0}, fc{3.0, c, 3.0, 2.0};
    KrylovOptions o, oc;
    o.exact = f;
    oc.exact = fc;
    const auto r = krylov_functional(s, GridFn2::sample(kGrid, f), 0.0, 10.0, 0.02, 20000, 1.0, true, 9, o);
    const auto rc =
        krylov_functional(shifted(s, c), GridFn2::sample(kGrid, fc), c, 10.0, 0.02, 20000, 1.0, true, 9, oc);
    EXPECT_LT(std::abs(r.lhs - rc.lhs), 3.0 * std::hypot(*r.se, *rc.se));
}

TEST(LocalKrylov, SourceOutsideWindow) {
    const ProblemSpec s = make_preset(Preset::smooth_sine, 0.8, 1.2, 0.3, 1.5, 1.0);
    const BumpSource far{2.0, 6.0, 2.0, 2.0};
    KrylovOptions o;
    o.exact = far;
    const auto f = GridFn2::sample(kGrid, far);
    const auto r = local_krylov(s, f, 0.0, 4.0, 2.0, 0.02, 2000, 1, o);
    EXPECT_EQ(r.lhs, 0.0);
}

TEST(LocalKrylov, BoundedIntegrand) {
    const ProblemSpec s = make_preset(Preset::step_b, 0.8, 1.2, 0.3, 1.5, 1.0);
    const double t = 4.0, m = 2.0;
    // 1 on most of [0, t] x [-m, m], cut to zero smoothly at the edges.
    auto edge = [](double u) { return u <= 0 ? 0.0 : u >= 1 ? 1.0 : Mollifier::cdf(u - 0.5); };
    SourceFn one = [&](double tt, double x) {
        return edge(4 * tt) * edge(4 * (t - tt)) * edge(4 * (x + m)) * edge(4 * (m - x));
    };
    KrylovOptions o;
    o.exact = one;
    const auto r = local_krylov(s, GridFn2::sample(kGrid, one), 0.0, t, m, 0.02, 4000, 2, o);
    EXPECT_GT(r.lhs, 0.0);
    EXPECT_LE(r.lhs, t);
    EXPECT_TRUE(std::isfinite(r.implied_constant));
}

TEST(LocalKrylov, ImpliedConstantStableAcrossShapes) {
    const ProblemSpec s = make_preset(Preset::step_b, 0.8, 1.2, 0.3, 1.5, 1.0);
    const Grid2 g(256, 512, 32.0, 64.0);
    const auto battery = krylov_f_battery(g);
    // bump, ridge in t, ridge in x.
    std::vector<double> c;
    for (std::size_t i : {0u, 2u, 3u}) {
        KrylovOptions o;
        o.exact = battery[i];
        c.push_back(local_krylov(s, GridFn2::sample(g, battery[i]), 0.0, 10.0, 3.0, 0.02, 10000, 5, o)
                        .implied_constant);
    }
    const double mean = (c[0] + c[1] + c[2]) / 3.0;
    for (double v : c) EXPECT_NEAR(v / mean, 1.0, 0.2);
}

TEST(FeynmanKac, ZeroSource) {
    const Grid2 g(64, 256, 16.0, 64.0);
    const auto r = feynman_kac_check(make_preset(Preset::smooth_sine, 0.8, 1.2, 0.3, 1.5, 1.0), g,
                                     [](double, double) { return 0.0; }, 0.0, 1.0, 0.1, 1000, 1);
    EXPECT_EQ(r.coarse.lhs, 0.0);
    EXPECT_EQ(r.coarse.rhs, 0.0);
    EXPECT_TRUE(r.coarse.pass);
}

TEST(FeynmanKac, BrownianIdentityAndOracle) {
    const Grid2 g(128, 512, 16.0, 64.0);
    const oracle::GaussSource src{0.75, 0.4, 0.0, 1.0};
    const auto r = feynman_kac_check(brownian(), g, src, 0.0, 1.0, 0.05, 20000, 2);
    EXPECT_TRUE(r.coarse.pass);
    EXPECT_TRUE(r.fine.pass);
    EXPECT_NEAR(r.u0, oracle::heat_resolvent(src, 0.0, 0.0, 2.0), 1e-6);
}

TEST(FeynmanKac, ExitsRaiseRegimeError) {
    const Grid2 g(64, 64, 16.0, 4.0);
    const oracle::GaussSource src{0.75, 0.0, 0.4, 0.3};
    EXPECT_THROW(feynman_kac_check(make_preset(Preset::constant, 1.0, 1.0, 0.0, 1.5, 1.0), g, src, 0.0, 1.0, 0.1,
                                   2000, 1),
                 RegimeError);
}
