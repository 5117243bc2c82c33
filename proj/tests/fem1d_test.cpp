#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "podwave/fem1d.hpp"
#include "test_util.hpp"

using namespace podwave;
using podwave::testing::Random;
using std::numbers::pi;

namespace {

ScalarFunction hat(const FemSpace& s, std::size_t j)
{
    const double xj = s.node(j + 1);
    const double h = s.h();
    return [xj, h](double x) { return std::max(0.0, 1.0 - std::abs(x - xj) / h); };
}

double u0(double x)
{
    return (std::exp(x) + x * x - std::cos(pi * x)) * std::sin(pi * x) +
           (std::exp(x * x) + x * x - x) * std::sin(5.0 * pi * x);
}

}  // namespace

TEST(FemSpace, TwoElements)
{
    const FemSpace s = assemble(2);
    ASSERT_EQ(s.n_dof(), 1u);
    EXPECT_DOUBLE_EQ(s.mass().diag[0], 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(s.stiffness().diag[0], 4.0);
    const Vector u{1.0};
    EXPECT_DOUBLE_EQ(s.l2_inner(u, u), 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(s.h10_inner(u, u), 4.0);
}

TEST(FemSpace, FourElements)
{
    const FemSpace s = assemble(4);
    ASSERT_EQ(s.n_dof(), 3u);
    EXPECT_DOUBLE_EQ(s.h(), 0.25);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_DOUBLE_EQ(s.mass().diag[i], 1.0 / 6.0);
        EXPECT_DOUBLE_EQ(s.stiffness().diag[i], 8.0);
    }
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_DOUBLE_EQ(s.mass().sub[i], 1.0 / 24.0);
        EXPECT_DOUBLE_EQ(s.mass().sup[i], 1.0 / 24.0);
        EXPECT_DOUBLE_EQ(s.stiffness().sub[i], -4.0);
        EXPECT_DOUBLE_EQ(s.stiffness().sup[i], -4.0);
    }
}

TEST(FemSpace, MatchesHatFunctionQuadrature)
{
    // entries from integrating products of hat functions directly
    const FemSpace s(7);
    for (std::size_t i = 0; i < s.n_dof(); ++i)
        for (std::size_t j = i; j < std::min(i + 2, s.n_dof()); ++j) {
            const ScalarFunction pi_ = hat(s, i), pj = hat(s, j);
            const double m = integrate([&](double x) { return pi_(x) * pj(x); }, 0.0, 1.0, 7);
            const double expect = i == j ? s.mass().diag[i] : s.mass().sup[i];
            EXPECT_NEAR(m, expect, 1e-15);
        }
}

TEST(FemSpace, InteriorStiffnessRowsSumToZero)
{
    const FemSpace s(9);
    const Vector ones(s.n_dof(), 1.0);
    const Vector r = s.stiffness().apply(ones);
    for (std::size_t i = 1; i + 1 < s.n_dof(); ++i)
        EXPECT_NEAR(r[i], 0.0, 1e-12);
}

TEST(FemSpace, RejectsTooFewElements)
{
    EXPECT_THROW(FemSpace(1), std::invalid_argument);
    EXPECT_THROW(FemSpace(0), std::invalid_argument);
}

TEST(FemSpace, InnerProductsSymmetricAndDefinite)
{
    Random rnd(3);
    const FemSpace s(30);
    for (int t = 0; t < 20; ++t) {
        const Vector u = rnd.vector(s.n_dof()), v = rnd.vector(s.n_dof());
        EXPECT_NEAR(s.l2_inner(u, v), s.l2_inner(v, u), 1e-15);
        EXPECT_NEAR(s.h10_inner(u, v), s.h10_inner(v, u), 1e-12);
        EXPECT_GT(s.l2_norm_sq(u), 0.0);
        EXPECT_GT(s.h10_norm_sq(u), 0.0);
    }
    EXPECT_EQ(s.l2_norm_sq(Vector(s.n_dof(), 0.0)), 0.0);
}

TEST(FemSpace, DiscretePoincare)
{
    Random rnd(4);
    for (std::size_t n : {2u, 3u, 10u, 100u}) {
        const FemSpace s(n);
        for (int t = 0; t < 50; ++t) {
            const Vector u = rnd.vector(s.n_dof());
            EXPECT_LE(pi * pi * s.l2_norm_sq(u), s.h10_norm_sq(u) * (1.0 + 1e-10));
        }
        // the lowest discrete mode comes closest
        const Vector first = s.interpolate([](double x) { return std::sin(pi * x); });
        EXPECT_LE(pi * pi * s.l2_norm_sq(first), s.h10_norm_sq(first) * (1.0 + 1e-10));
    }
}

TEST(FemSpace, SineInterpolantH10NormConverges)
{
    const FemSpace s(1000);
    const Vector u = s.interpolate([](double x) { return std::sin(pi * x); });
    EXPECT_NEAR(s.h10_norm_sq(u), pi * pi / 2.0, 1e-5);
}

TEST(L2Project, ZeroFunction)
{
    const FemSpace s(12);
    const Vector p = s.l2_project([](double) { return 0.0; });
    EXPECT_EQ(p, Vector(s.n_dof(), 0.0));
}

TEST(L2Project, HatFunctionGivesUnitVector)
{
    const FemSpace s(10);
    for (std::size_t j = 0; j < s.n_dof(); ++j) {
        const Vector p = s.l2_project(hat(s, j));
        for (std::size_t i = 0; i < s.n_dof(); ++i)
            EXPECT_NEAR(p[i], i == j ? 1.0 : 0.0, 1e-12);
    }
}

TEST(L2Project, Idempotent)
{
    Random rnd(5);
    const FemSpace s(25);
    const Vector u = rnd.vector(s.n_dof());
    const Vector p = s.l2_project([&](double x) { return s.evaluate(u, x); });
    EXPECT_LE(norm_inf(subtract(p, u)), 1e-12);
}

TEST(L2Project, StandardInitialDataConvergesAtSecondOrder)
{
    double prev = 0.0;
    for (std::size_t n : {50u, 100u, 200u, 400u}) {
        const FemSpace s(n);
        const double err = s.l2_error(s.l2_project(u0), u0);
        if (prev > 0.0) {
            EXPECT_NEAR(std::log2(prev / err), 2.0, 0.05) << "n = " << n;
        }
        prev = err;
    }
}

TEST(Evaluate, PiecewiseLinear)
{
    const FemSpace s(4);
    const Vector u{1.0, 2.0, 3.0};
    EXPECT_DOUBLE_EQ(s.evaluate(u, 0.25), 1.0);
    EXPECT_DOUBLE_EQ(s.evaluate(u, 0.625), 2.5);
    EXPECT_DOUBLE_EQ(s.evaluate(u, 0.125), 0.5);
    EXPECT_DOUBLE_EQ(s.evaluate(u, 0.875), 1.5);
    EXPECT_DOUBLE_EQ(s.evaluate(u, 1.0), 0.0);
}

TEST(Integrate, GaussCompositeIsAccurate)
{
    EXPECT_NEAR(integrate([](double x) { return std::sin(x); }, 0.0, pi, 20), 2.0, 1e-14);
    EXPECT_NEAR(integrate([](double x) { return x * x * x * x; }, 0.0, 1.0, 1), 0.2, 1e-15);
}
