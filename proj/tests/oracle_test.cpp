#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "slfd/oracle.hpp"

using namespace slfd;

TEST(SymmetricEigen, DiagonalAndTwoByTwo)
{
    DenseMatrix<double> a = DenseMatrix<double>::Zero(3, 3);
    a(0, 0) = 3;
    a(1, 1) = -1;
    a(2, 2) = 2;
    EXPECT_EQ(symmetric_eigenvalues(a), (std::vector<double>{-1, 2, 3}));

    DenseMatrix<double> b = DenseMatrix<double>::Zero(2, 2);
    b(0, 0) = 2;
    b(1, 1) = 2;
    b(0, 1) = b(1, 0) = 1;
    const auto e = symmetric_eigenvalues(b);
    EXPECT_NEAR(e[0], 1, 1e-15);
    EXPECT_NEAR(e[1], 3, 1e-15);
}

TEST(SymmetricEigen, TraceAndFrobeniusPreserved)
{
    std::mt19937_64 rng(5);
    std::normal_distribution<double> d;
    const int n = 30;
    DenseMatrix<double> a(n, n);
    double trace = 0, frob = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
        {
            a(i, j) = a(j, i) = d(rng);
            frob += (i == j ? 1 : 2) * a(i, j) * a(i, j);
        }
    for (int i = 0; i < n; ++i)
        trace += a(i, i);
    const auto e = symmetric_eigenvalues(a);
    double st = 0, sf = 0;
    for (double v : e)
    {
        st += v;
        sf += v * v;
    }
    EXPECT_NEAR(st, trace, 1e-12);
    EXPECT_NEAR(sf, frob, 1e-10);
    EXPECT_TRUE(std::is_sorted(e.begin(), e.end()));
}

TEST(Oracle, ZeroPotential)
{
    const auto r = galerkin_oracle(Potential<double>::constant(0.0), 24);
    EXPECT_LT(r.orthonormality_defect, 1e-12);
    for (int n = 0; n < 24; ++n)
        EXPECT_NEAR(r.eigenvalues[n], n * (n + 1.0), 1e-10 * std::max(1.0, n * (n + 1.0)));
}

TEST(Oracle, ConstantPotential)
{
    const auto r = galerkin_oracle(Potential<double>::constant(7.0), 20);
    for (int n = 0; n < 10; ++n)
        EXPECT_NEAR(r.eigenvalues[n], n * (n + 1.0) + 7, 1e-10 * (n * (n + 1.0) + 7));
}

TEST(Oracle, LinearPotential)
{
    const auto r = galerkin_oracle(Potential<double>::from_text("x"), 60);
    EXPECT_NEAR(r.eigenvalues[0], -0.15766348313774411, 1e-12);
}

TEST(Oracle, Errors)
{
    EXPECT_THROW(galerkin_oracle(Potential<double>::constant(0.0), 8), InvalidParameter);
    EXPECT_THROW(galerkin_oracle(Potential<double>::from_text("1/(x - x)"), 16), NonFinite);
}
