#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <vector>

#include "stablelab/mollifier.hpp"
#include "stablelab/presets.hpp"
#include "stablelab/problem.hpp"

using namespace stablelab;
using boost::math::quadrature::gauss_kronrod;

namespace {

// int_a^b g over the pieces cut at the given points.
template <typename G>
double piecewise(G g, double a, double b, std::vector<double> cuts) {
    cuts.push_back(b);
    double s = 0.0, lo = a;
    for (double c : cuts) {
        if (c <= lo || c > b) continue;
        s += gauss_kronrod<double, 31>::integrate(g, lo, c, 12, 1e-12);
        lo = c;
    }
    return s;
}

// (c * psi_eps)(t, x) by nested adaptive quadrature over the kernel support,
// split where c jumps.
template <typename C>
double convolve(C c, const Mollifier& m, double t, double x, std::vector<double> t_cuts,
                std::vector<double> x_cuts) {
    const double r = 0.5 * m.eps();
    for (auto& v : t_cuts) v = t - v;
    for (auto& v : x_cuts) v = x - v;
    return piecewise(
        [&](double s) {
            return piecewise([&](double y) { return m.kernel(s, y) * c(t - s, x - y); }, -r, r, x_cuts);
        },
        -r, r, t_cuts);
}

}  // namespace

TEST(Mollifier, SupportAndMass) {
    const Mollifier m(1.0);
    EXPECT_EQ(m.kernel(0.5, 0.5), 0.0);
    EXPECT_EQ(m.kernel(0.9, 0.1), 0.0);
    EXPECT_EQ(m.kernel(0.0, 1.0), 0.0);
    EXPECT_GT(m.kernel(0.3, 0.3), 0.0);
    const double mass = convolve([](double, double) { return 1.0; }, m, 0.0, 0.0, {}, {});
    EXPECT_NEAR(mass, 1.0, 1e-8);
    const Mollifier small(0.2);
    EXPECT_NEAR(convolve([](double, double) { return 1.0; }, small, 0.0, 0.0, {}, {}), 1.0, 1e-8);
}

TEST(Mollifier, DensityAndTransform) {
    EXPECT_NEAR(Mollifier::cdf(0.0), 0.5, 1e-12);
    EXPECT_NEAR(Mollifier::cdf(0.5), 1.0, 1e-12);
    EXPECT_NEAR(Mollifier::density_transform(0.0), 1.0, 1e-12);
    const double k = 7.3;
    const double ref = gauss_kronrod<double, 61>::integrate(
        [k](double s) { return Mollifier::density(s) * std::cos(k * s); }, -0.5, 0.5, 12, 1e-14);
    EXPECT_NEAR(Mollifier::density_transform(k), ref, 1e-10);
    const Mollifier m(0.25);
    EXPECT_NEAR(m.transform(4.0, 8.0), Mollifier::density_transform(1.0) * Mollifier::density_transform(2.0), 1e-14);
}

TEST(Mollify, ConstantIsPreserved) {
    const Grid2 g(32, 64, 8.0, 16.0);
    const auto one = GridFn2::sample(g, [](double, double) { return 1.0; });
    EXPECT_LT((mollify(one, Mollifier(0.5)) - one).max_abs(), 1e-13);
    EXPECT_THROW(mollify(one, Mollifier(2.5)), DomainError);
}

TEST(Mollify, StepMidpointIsAverage) {
    const double l = 0.8, r = 1.2, eps = 0.125;
    auto step = [=](double, double x) { return x < 0.0 ? l : r; };
    const Mollifier m(eps);
    const double direct = convolve(step, m, 0.3, 0.0, {}, {0.0});
    EXPECT_NEAR(direct, 0.5 * (l + r), 1e-10);
    EXPECT_NEAR(smooth_value(Coefficient(step), 0.3, 0.0, eps), 0.5 * (l + r), 1e-3);
    const ProblemSpec s = make_preset(Preset::step_b, l, r, 0.0, 1.5, 1.0);
    EXPECT_NEAR(smooth_value(s.b, 0.3, 0.0, eps), 0.5 * (l + r), 1e-12);
    for (double x : {-0.05, 0.02, 0.04})
        EXPECT_NEAR(smooth_value(s.b, 0.3, x, eps), convolve(step, m, 0.3, x, {}, {0.0}), 1e-6) << x;
}

TEST(Mollify, ClosedFormsMatchQuadrature) {
    const double eps = 0.3;
    const Mollifier m(eps);
    const ProblemSpec sine = make_preset(Preset::smooth_sine, 0.8, 1.2, 0.3, 1.5, 1.0);
    const ProblemSpec board = make_preset(Preset::checkerboard_b, 0.8, 1.2, 0.3, 1.5, 1.0);
    for (auto [t, x] : {std::pair{0.1, 0.95}, std::pair{-0.9, 2.05}, std::pair{0.4, -0.3}}) {
        EXPECT_NEAR(smooth_value(sine.b, t, x, eps), convolve(sine.b, m, t, x, {}, {}), 1e-10);
        EXPECT_NEAR(smooth_value(sine.a, t, x, eps), convolve(sine.a, m, t, x, {}, {}), 1e-10);
        const std::vector<double> cuts{-3, -2, -1, 0, 1, 2, 3};
        EXPECT_NEAR(smooth_value(board.b, t, x, eps), convolve(board.b, m, t, x, cuts, cuts), 1e-6);
    }
}

TEST(Mollify, LipschitzErrorHalves) {
    const Grid2 g(64, 2048, 8.0, 16.0);
    const auto u = GridFn2::sample(g, [](double t, double x) {
        return std::max(0.0, 1.0 - std::abs(x)) * std::exp(-t * t);
    });
    double prev = 0.0;
    for (double eps : {0.4, 0.2, 0.1, 0.05}) {
        const double e = l2_norm(mollify(u, Mollifier(eps)) - u);
        if (prev > 0.0) EXPECT_LE(e, 0.5 * prev) << eps;
        prev = e;
    }
}

TEST(Mollify, SourceConsistency) {
    // Smoothing u and the coefficients drives the manufactured source to f.
    const Grid2 g(64, 256, 16.0, 32.0);
    const ProblemSpec s = make_preset(Preset::smooth_sine, 0.8, 1.2, 0.3, 1.5, 1.0);
    const auto u = GridFn2::sample(g, [](double t, double x) { return std::exp(-t * t / 4.0 - x * x / 8.0); });
    const auto f = manufactured_source(s, u);
    double prev = 0.0;
    for (double eps : {0.8, 0.4, 0.2}) {
        ProblemSpec se = s;
        se.a = mollified(s.a, eps);
        se.b = mollified(s.b, eps);
        const double e = l2_norm(manufactured_source(se, mollify(u, Mollifier(eps))) - f);
        if (prev > 0.0) EXPECT_LT(e, 0.5 * prev) << eps;
        prev = e;
    }
}
