#include <gtest/gtest.h>

#include <cmath>

#include "slfd/fdengine.hpp"

using namespace slfd;

namespace
{

// lowest eigenvalue of q = x from a 200-mode Legendre-Galerkin computation
constexpr double lambda0_ref = -0.15766348313774411;

struct LinearCase
{
    Potential<double> q;
    PiecewiseConstantCoeff<double> qbar;
    SincGrid<double> grid;
};

LinearCase linear(int N, int K)
{
    LinearCase s{Potential<double>::from_text("x"), {}, {}};
    s.qbar = approximate_coefficient(s.q, build_mesh<double>(N));
    s.grid = build_grid(s.qbar.mesh, K);
    return s;
}

FdSolution<double> run(const LinearCase& s, int n, int rank, std::optional<double> tol = std::nullopt)
{
    FdOptions<double> opt;
    opt.rank = rank;
    opt.tol = tol;
    return solve_fd(n, s.q, s.qbar, s.grid, opt);
}

} // namespace

TEST(Coefficients, CatalanAndAlpha)
{
    const std::uint64_t cat[] = {1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796};
    for (int j = 0; j <= 10; ++j)
    {
        EXPECT_EQ(catalan(j), cat[j]);
        EXPECT_NEAR(alpha<double>(j) * std::pow(4.0, j), double(cat[j]), 1e-9 * cat[j]);
    }
    EXPECT_EQ(catalan(35), 3116285494907301262ull);
    EXPECT_THROW(catalan(36), InvalidParameter);
}

TEST(Coefficients, AlphaAsymptotic)
{
    for (int j = 1; j <= 40; ++j)
    {
        const double a = alpha<double>(j);
        EXPECT_LE(a, 1 / ((j + 1) * std::sqrt(std::numbers::pi * j)));
        EXPECT_GT(a, 0.5 / ((j + 1) * std::sqrt(std::numbers::pi * j)));
    }
}

TEST(Bounds, Statuses)
{
    EXPECT_EQ(apriori_bounds(0.5, 0.25).status, BoundStatus::Convergent);
    EXPECT_EQ(apriori_bounds(1.0, 0.25).status, BoundStatus::Critical);
    EXPECT_EQ(apriori_bounds(1.0, 0.5).status, BoundStatus::NotApplicable);
    EXPECT_FALSE(apriori_bounds(1.0, 0.5).eig_bound(3));
    EXPECT_THROW(apriori_bounds(1.0, std::numeric_limits<double>::infinity()), InvalidParameter);
}

TEST(Bounds, ConvergentFormulas)
{
    const auto b = apriori_bounds(0.5, 0.2); // r = 0.4
    EXPECT_NEAR(b.r, 0.4, 1e-15);
    EXPECT_NEAR(*b.eig_bound(3), 0.2 * std::pow(0.4, 3) * alpha<double>(3) / 0.6, 1e-16);
    EXPECT_NEAR(*b.fun_bound(3), std::pow(0.4, 4) * alpha<double>(4) / 0.6, 1e-16);
    const auto m = b.rank_for(1e-12);
    ASSERT_TRUE(m);
    EXPECT_LE(*b.eig_bound(*m), 1e-12);
    EXPECT_GT(*b.eig_bound(*m - 1), 1e-12);
}

TEST(Bounds, CriticalTailDecreases)
{
    const auto b = apriori_bounds(1.0, 0.25);
    for (int m = 0; m < 30; ++m)
        EXPECT_GT(*b.eig_bound(m), *b.eig_bound(m + 1));
}

TEST(Bounds, CriticalTailBoundsAlphaSum)
{
    // sum_{j >= 0} alpha_j = 2
    std::vector<double> a(400001);
    for (int j = 0; j < static_cast<int>(a.size()); ++j)
        a[j] = j == 0 ? 1.0 : a[j - 1] * (j == 1 ? 0.25 : (2.0 * j - 1) / (2.0 * j + 2));
    double head = 0;
    for (int m = 0; m <= 40; ++m)
    {
        const double rest = 2.0 - head;
        EXPECT_LE(rest, ConvergenceBound<double>::tail(m) * (1 + 1e-12)) << m;
        head += a[m];
    }
}

TEST(Bounds, ZeroCoefficientRatioAndAsymptoticGap)
{
    for (int n = 1; n <= 10; ++n)
        EXPECT_DOUBLE_EQ(zero_coefficient_ratio(n, 1.0), 2.0 / n);
    EXPECT_FALSE(asymptotic_gap_bound(2, 1.0));
    EXPECT_DOUBLE_EQ(*asymptotic_gap_bound(3, 1.0), 0.25);
}

TEST(Fd, ZeroPerturbationIsExact)
{
    LinearCase s{Potential<double>::constant(0.0), {}, {}};
    s.qbar = approximate_coefficient(s.q, build_mesh<double>(2));
    s.grid = build_grid(s.qbar.mesh, 64);
    const auto sol = run(s, 3, 4);
    EXPECT_NEAR(sol.eigenvalue_sum(), 12.0, 1e-11);
    for (int j = 1; j <= 4; ++j)
        EXPECT_EQ(sol.correction_norms[j], 0.0);
}

TEST(Fd, NormSqMatchesQuadrature)
{
    const auto s = linear(3, 120);
    const auto sol = run(s, 1, 3);
    EXPECT_NEAR(sol.norm_sq, inner_product(s.grid, sol.corrections[0], sol.corrections[0]), 1e-15);
    EXPECT_NEAR(sol.relative_norm(0), 1.0, 1e-15);
}

TEST(Fd, CorrectionsOrthogonalToBasicEigenfunction)
{
    const auto s = linear(3, 120);
    const auto sol = run(s, 2, 8);
    for (int j = 1; j <= 8; ++j)
    {
        const double ip = inner_product(s.grid, sol.corrections[j], sol.corrections[0]);
        EXPECT_LT(std::abs(ip), 1e-13 * std::sqrt(sol.norm_sq) * sol.correction_norms[j] + 1e-30) << j;
        EXPECT_LT(sol.diagnostics[j].orthogonality, 1e-12);
    }
}

TEST(Fd, MajorantHolds)
{
    const auto s = linear(3, 200);
    const auto sol = run(s, 0, 12);
    const auto basic = solve_basic(0, s.qbar, s.grid);
    const auto dev = sup_deviation(s.q, s.qbar).value;
    const auto b = apriori_bounds(basic.gap_m, dev);
    ASSERT_EQ(b.status, BoundStatus::Convergent);
    for (int m = 0; m <= 12; ++m)
        EXPECT_LE(std::abs(sol.diagnostics[m].lambda_sum - lambda0_ref), *b.eig_bound(m) + 1e-12) << m;
}

TEST(Fd, ConvergesWithMeshRefinement)
{
    double prev = 1;
    for (int N : {1, 3, 9})
    {
        const auto sol = run(linear(N, 200), 0, 2);
        const double err = std::abs(sol.eigenvalue_sum() - lambda0_ref);
        EXPECT_LT(err, prev) << N;
        prev = err;
    }
}

TEST(Fd, HigherIndicesConvergeFaster)
{
    const auto s = linear(1, 200);
    double prev = 1;
    for (int n = 1; n <= 6; ++n)
    {
        const double r = run(s, n, 4).relative_norm(4);
        EXPECT_LT(r, prev) << n;
        prev = r;
    }
}

TEST(Fd, ResidualsSmallAtHighRank)
{
    const auto sol = run(linear(3, 350), 0, 15);
    EXPECT_LT(sol.diagnostics.back().eta, 1e-9);
    EXPECT_LT(sol.diagnostics.back().eta_bar, 1e-9);
    EXPECT_NEAR(sol.eigenvalue_sum(), lambda0_ref, 1e-11);
}

TEST(Fd, ToleranceStopsEarly)
{
    const auto sol = run(linear(3, 200), 0, 40, 1e-8);
    EXPECT_LT(sol.rank, 40);
    EXPECT_LT(std::abs(sol.lambda_corrections.back()), 1e-8);
}

TEST(Fd, RankZeroIsBasicProblem)
{
    const auto s = linear(3, 100);
    const auto sol = run(s, 1, 0);
    EXPECT_EQ(sol.rank, 0);
    EXPECT_DOUBLE_EQ(sol.eigenvalue_sum(), solve_basic(1, s.qbar, s.grid).lambda0);
}

TEST(Fd, InvalidArguments)
{
    const auto s = linear(1, 32);
    auto u = s.grid.make_function();
    EXPECT_THROW(compute_lambda_correction(0, u, u, u, s.grid, 1.0), InvalidParameter);
    EXPECT_THROW(run(s, 0, -1), InvalidParameter);
}
