#include <gtest/gtest.h>

#include <cmath>

#include "slfd/sincquad.hpp"

using namespace slfd;

TEST(TanhRule, SmoothIntegrandConverges)
{
    const double exact = std::exp(1.0) - std::exp(-1.0);
    double prev = 1;
    for (int K : {16, 32, 64, 128})
    {
        const auto g = build_grid(build_mesh<double>(1), K);
        const double err = std::abs(integrate(g, g.sample([](double x) { return std::exp(x); })) - exact);
        EXPECT_LT(err, prev);
        prev = err;
    }
    EXPECT_LT(prev, 1e-11);
}

TEST(TanhRule, EndpointSingularIntegrand)
{
    double prev = 1;
    for (int K : {50, 100, 200, 400})
    {
        const auto g = build_grid(build_mesh<double>(1), K);
        auto f = g.make_function();
        for (int j = -K; j <= K; ++j)
            f.at(0, j) = 1 / std::sqrt(g.abscissa(0, j).weight());
        const double err = std::abs(integrate(g, f) - std::numbers::pi);
        EXPECT_LT(err, prev) << K;
        prev = err;
    }
    EXPECT_LT(prev, 1e-9);
}

TEST(TanhRule, MultiIntervalMatchesSingle)
{
    const auto one = build_grid(build_mesh<double>(1), 100);
    const auto four = build_grid(build_mesh<double>(4, {0.3}), 100);
    auto f = [](double x) { return std::cos(3 * x) + x * x; };
    const double exact = 2 * std::sin(3.0) / 3 + 2.0 / 3;
    EXPECT_NEAR(integrate(one, one.sample(f)), exact, 1e-11);
    EXPECT_NEAR(integrate(four, four.sample(f)), exact, 1e-10);
}

TEST(TanhRule, WeightsPositiveAndNodesInside)
{
    const auto g = build_grid(build_mesh<double>(3), 50);
    for (int i = 0; i < 3; ++i)
        for (int j = -50; j <= 50; ++j)
        {
            EXPECT_GT(g.weight(i, j), 0.0);
            EXPECT_GE(g.node(i, j), g.mesh().left(i));
            EXPECT_LE(g.node(i, j), g.mesh().right(i));
            const double z = g.interior_node(i, j);
            EXPECT_GT(z, g.mesh().left(i));
            EXPECT_LT(z, g.mesh().right(i));
        }
}

TEST(Stenger, CumulativeIntegralOfCosine)
{
    const auto g = build_grid(build_mesh<double>(3), 120);
    const auto c = cumulative_integral(g, g.sample([](double x) { return std::cos(x); }));
    double worst = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = -120; j <= 120; ++j)
            worst = std::max(worst, std::abs(c.at(i, j) - (std::sin(g.node(i, j)) + std::sin(1.0))));
    EXPECT_LT(worst, 1e-11);
}

TEST(Stenger, LastNodeAgreesWithDefiniteIntegral)
{
    const auto g = build_grid(build_mesh<double>(2), 100);
    const auto f = g.sample([](double x) { return std::exp(-x) * x; });
    const auto c = cumulative_integral(g, f);
    EXPECT_NEAR(c.at(1, 100), integrate(g, f), 1e-12);
}

TEST(Stenger, LinearInSamples)
{
    const auto g = build_grid(build_mesh<double>(1), 40);
    const auto a = g.sample([](double x) { return x; });
    const auto b = g.sample([](double x) { return x * x * x; });
    auto s = a;
    s.axpy(2.5, b);
    const auto ca = cumulative_integral(g, a), cb = cumulative_integral(g, b), cs = cumulative_integral(g, s);
    for (std::size_t k = 0; k < cs.size(); ++k)
        EXPECT_NEAR(cs[k], ca[k] + 2.5 * cb[k], 1e-14);
}

TEST(GridFunction, ShapeMismatchThrows)
{
    GridFunction<double> a(2, 10), b(3, 10);
    EXPECT_THROW(a += b, DimensionMismatch);
}

TEST(SincGrid, RejectsSmallK)
{
    EXPECT_THROW(build_grid(build_mesh<double>(1), 4), InvalidParameter);
}
