#include <gtest/gtest.h>

#include <cmath>

#include "slfd/coeffmesh.hpp"

using namespace slfd;

TEST(Mesh, UniformPoints)
{
    const auto m = build_mesh<double>(4);
    ASSERT_EQ(m.intervals(), 4);
    EXPECT_EQ(m.points(), (std::vector<double>{-1, -0.5, 0, 0.5, 1}));
    EXPECT_EQ(m.max_step(), 0.5);
}

TEST(Mesh, BreakpointsInserted)
{
    const auto m = build_mesh<double>(3, {-1.0 / 3, 5.0 / 12});
    // -1/3 snaps onto the uniform lattice, 5/12 is new
    EXPECT_EQ(m.intervals(), 4);
    for (double b : {-1.0 / 3, 5.0 / 12})
        EXPECT_NE(std::find(m.points().begin(), m.points().end(), b), m.points().end());
}

TEST(Mesh, BreakpointAlignmentProperty)
{
    for (int N = 1; N <= 40; ++N)
    {
        const std::vector<double> bps{-1.0 / 3, 1.0 / 3, 5.0 / 12, 0.0};
        const auto m = build_mesh<double>(N, bps);
        for (double b : bps)
            EXPECT_NE(std::find(m.points().begin(), m.points().end(), b), m.points().end()) << N;
        for (int i = 0; i < m.intervals(); ++i)
            EXPECT_GT(m.width(i), 1e-10);
    }
}

TEST(Mesh, Locate)
{
    const auto m = build_mesh<double>(4);
    EXPECT_EQ(m.locate(-0.99), 0);
    EXPECT_EQ(m.locate(-0.5), 1);
    EXPECT_EQ(m.locate(0.99), 3);
    EXPECT_EQ(m.locate(1.0), 3);
}

TEST(Mesh, InvalidInput)
{
    EXPECT_THROW(build_mesh<double>(0), InvalidParameter);
    EXPECT_THROW(build_mesh<double>(3, {1.0}), InvalidParameter);
    EXPECT_THROW(Mesh<double>({-1, 0.5, 0.2, 1}), InvalidParameter);
}

TEST(Coefficient, MidpointAndEndpointAverage)
{
    const auto q = Potential<double>::from_text("x^2");
    const auto m = build_mesh<double>(2);
    const auto mid = approximate_coefficient(q, m, CoeffRule::Midpoint);
    EXPECT_DOUBLE_EQ(mid.values[0], 0.25);
    const auto avg = approximate_coefficient(q, m, CoeffRule::EndpointAverage);
    EXPECT_NEAR(avg.values[1], 0.5, 1e-15);
}

TEST(Coefficient, SupDeviationOfLinearPotential)
{
    const auto q = Potential<double>::from_text("x");
    for (int N : {1, 2, 3, 5, 8, 13})
    {
        const auto qbar = approximate_coefficient(q, build_mesh<double>(N));
        const auto d = sup_deviation(q, qbar);
        EXPECT_TRUE(d.reliable);
        EXPECT_NEAR(d.value, 1.0 / N, 1e-12) << N;
    }
}

TEST(Coefficient, SingularPotentialFlaggedUnreliable)
{
    const auto q = Potential<double>::from_text("ln(abs(x - 1/3))", {1.0 / 3});
    const auto qbar = approximate_coefficient(q, build_mesh<double>(6, {1.0 / 3}));
    EXPECT_FALSE(sup_deviation(q, qbar).reliable);
}

TEST(Coefficient, UndeclaredSingularityThrows)
{
    const auto q = Potential<double>::from_text("1/x");
    EXPECT_THROW(approximate_coefficient(q, build_mesh<double>(2), CoeffRule::EndpointAverage), EvaluationError);
}
