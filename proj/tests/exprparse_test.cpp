#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>

#include "slfd/exprparse.hpp"

using namespace slfd;

namespace
{

double ev(const std::string& s, double x) { return parse(s).evaluate<double>(x); }

std::string random_expr(std::mt19937& rng, int depth)
{
    std::uniform_int_distribution<int> pick(0, depth > 0 ? 9 : 1);
    static const char* funcs[] = {"abs", "sin", "cos", "exp"};
    static const char* ops[] = {" + ", " - ", "*", "/", "^"};
    switch (pick(rng))
    {
    case 0: return "x";
    case 1: return std::to_string(std::uniform_int_distribution<int>(1, 9)(rng)) + ".5";
    case 2: return "-" + random_expr(rng, depth - 1);
    case 3: return "(" + random_expr(rng, depth - 1) + ")";
    case 4: return std::string(funcs[rng() % 4]) + "(" + random_expr(rng, depth - 1) + ")";
    default: return random_expr(rng, depth - 1) + ops[rng() % 5] + random_expr(rng, depth - 1);
    }
}

} // namespace

TEST(Expr, Arithmetic)
{
    EXPECT_DOUBLE_EQ(ev("1 + 2*3", 0), 7);
    EXPECT_DOUBLE_EQ(ev("(1 + 2)*3", 0), 9);
    EXPECT_DOUBLE_EQ(ev("2^3^2", 0), 512);
    EXPECT_DOUBLE_EQ(ev("-x^2", 3), -9);
    EXPECT_DOUBLE_EQ(ev("8/4/2", 0), 1);
    EXPECT_DOUBLE_EQ(ev("1e-3 + 2.5E2", 0), 250.001);
}

TEST(Expr, Functions)
{
    EXPECT_DOUBLE_EQ(ev("abs(x)", -2), 2);
    EXPECT_NEAR(ev("ln(5/36)", 0), -1.974081026022009627, 1e-15);
    EXPECT_DOUBLE_EQ(ev("sqrt(x)", 16), 4);
    EXPECT_NEAR(ev("sin(x)^2 + cos(x)^2", 0.7), 1, 1e-15);
    EXPECT_DOUBLE_EQ(ev("exp(0)", 0), 1);
}

TEST(Expr, ExamplePotentials)
{
    const double x = 0.1;
    EXPECT_NEAR(ev("ln(abs((5/12 - x)*(1/3 + x)))", x), std::log(std::abs((5.0 / 12 - x) * (1.0 / 3 + x))), 1e-15);
    EXPECT_NEAR(ev("1/sqrt(abs(x+1/3)) + ln(abs(x-1/3))", x),
                1 / std::sqrt(std::abs(x + 1.0 / 3)) + std::log(std::abs(x - 1.0 / 3)), 1e-15);
}

TEST(Expr, SyntaxErrors)
{
    EXPECT_THROW(parse("1 +"), SyntaxError);
    EXPECT_THROW(parse("(x"), SyntaxError);
    EXPECT_THROW(parse("x x"), SyntaxError);
    EXPECT_THROW(parse(""), SyntaxError);
    EXPECT_THROW(parse("foo(x)"), UnknownIdentifier);
    EXPECT_THROW(parse("y"), UnknownIdentifier);
}

TEST(Expr, SyntaxErrorOffset)
{
    try
    {
        parse("1 + * 2");
        FAIL();
    }
    catch (const SyntaxError& e)
    {
        EXPECT_EQ(e.offset(), 4u);
    }
}

TEST(Expr, NonFiniteNamesSubexpression)
{
    const auto e = parse("1 + ln(abs(x))");
    EXPECT_THROW(e.evaluate<double>(0.0), NonFinite);
    EXPECT_TRUE(std::isinf(e.evaluate_unchecked<double>(0.0)));
}

TEST(Expr, PrintRoundTrip)
{
    std::mt19937 rng(11);
    for (int k = 0; k < 50; ++k)
    {
        const std::string src = random_expr(rng, 4);
        const auto e = parse(src);
        EXPECT_EQ(e.to_string(), src);
        const auto again = parse(e.to_string());
        for (double x : {-0.7, 0.3, 0.9})
        {
            const double a = e.evaluate_unchecked<double>(x), b = again.evaluate_unchecked<double>(x);
            if (std::isnan(a))
                EXPECT_TRUE(std::isnan(b));
            else
                EXPECT_EQ(a, b);
        }
    }
}

TEST(Expr, FuzzNeverCrashes)
{
    std::mt19937 rng(3);
    const std::string alphabet = "x0123456789.+-*/^()eE abslnqrtico";
    for (int k = 0; k < 2000; ++k)
    {
        std::string s;
        const int len = std::uniform_int_distribution<int>(0, 20)(rng);
        for (int i = 0; i < len; ++i)
            s += alphabet[rng() % alphabet.size()];
        try
        {
            const auto e = parse(s);
            (void)e.evaluate_unchecked<double>(0.25);
        }
        catch (const UsageError&)
        {
        }
    }
}
