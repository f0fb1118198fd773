#pragma once

// The basic problem
//     [(1 - x^2) u']' + (lambda - qbar(x)) u = 0,   (1 - x^2) u' -> 0 at +-1,
// with qbar piecewise constant. On each interval the solution is
// A_i P_{nu_i} + B_i Q_{nu_i} with nu_i (nu_i + 1) = lambda - qbar_i; the
// coefficients are carried from the right end to the left by matching value
// and derivative at every interior mesh point.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "slfd/coeffmesh.hpp"
#include "slfd/errors.hpp"
#include "slfd/sincquad.hpp"
#include "slfd/specfun.hpp"

namespace slfd
{

template <typename Real>
struct TransferResult
{
    std::vector<Complex<Real>> a; // A_i, interval i = 0..N-1
    std::vector<Complex<Real>> b; // B_i
    std::vector<Complex<Real>> wronskian; // delta at interior point x_i, i = 1..N-1 (index i-1)
    std::vector<Degree<Real>> degrees;
};

// Backward recurrence from (A_N, B_N) on the last interval to (A_1, B_1).
template <typename Real>
TransferResult<Real> transfer_coefficients(Real lambda, const PiecewiseConstantCoeff<Real>& qbar, Complex<Real> a_last,
                                           Complex<Real> b_last)
{
    const auto& mesh = qbar.mesh;
    const int n = mesh.intervals();
    TransferResult<Real> r;
    r.a.resize(n);
    r.b.resize(n);
    r.wronskian.resize(n > 1 ? n - 1 : 0);
    r.degrees.reserve(n);
    for (int i = 0; i < n; ++i)
        r.degrees.push_back(Degree<Real>::from_lambda(lambda, qbar.values[i]));

    r.a[n - 1] = a_last;
    r.b[n - 1] = b_last;
    for (int i = n - 1; i >= 1; --i)
    {
        const Abscissa<Real> x(mesh.left(i));
        const auto right = legendre_pair(r.degrees[i], x);
        const auto left = legendre_pair(r.degrees[i - 1], x);
        const Complex<Real> c = r.a[i] * right.p + r.b[i] * right.q;
        const Complex<Real> d = r.a[i] * right.p_prime + r.b[i] * right.q_prime;
        const Complex<Real> delta = left.p * left.q_prime - left.p_prime * left.q;
        if (std::abs(delta) < Real(1e-300))
            throw SingularTransfer("Wronskian vanished at x = " + std::to_string(static_cast<double>(x.x)));
        r.wronskian[i - 1] = delta;
        r.a[i - 1] = (c * left.q_prime - d * left.q) / delta;
        r.b[i - 1] = (d * left.p - c * left.p_prime) / delta;
    }
    return r;
}

enum class SolutionKind
{
    Eigenfunction,
    SecondSolution,
};

template <typename Real>
class PiecewiseLegendreFunction
{
public:
    PiecewiseLegendreFunction() = default;
    PiecewiseLegendreFunction(Mesh<Real> mesh, TransferResult<Real> t, SolutionKind kind)
        : mesh_(std::move(mesh)), a_(std::move(t.a)), b_(std::move(t.b)), degrees_(std::move(t.degrees)), kind_(kind)
    {
    }

    const Mesh<Real>& mesh() const { return mesh_; }
    SolutionKind kind() const { return kind_; }
    const Degree<Real>& degree(int i) const { return degrees_[i]; }
    Complex<Real> a(int i) const { return a_[i]; }
    Complex<Real> b(int i) const { return b_[i]; }

    struct Value
    {
        Complex<Real> value;
        Complex<Real> derivative;
    };

    // Value and derivative using the representation of interval i.
    Value evaluate_on(int i, const Abscissa<Real>& x) const
    {
        const auto f = legendre_pair(degrees_[i], x);
        return {a_[i] * f.p + b_[i] * f.q, a_[i] * f.p_prime + b_[i] * f.q_prime};
    }

    Value evaluate_complex(const Abscissa<Real>& x) const
    {
        if (!(x.one_minus > Real(0) && x.one_plus > Real(0)))
            throw DomainError("piecewise Legendre function evaluated outside (-1, 1)");
        return evaluate_on(mesh_.locate(x.x), x);
    }

    Real eval(Real x) const { return eval(Abscissa<Real>(x)); }
    Real eval(const Abscissa<Real>& x) const { return evaluate_complex(x).value.real(); }
    Real derivative(Real x) const { return derivative(Abscissa<Real>(x)); }
    Real derivative(const Abscissa<Real>& x) const { return evaluate_complex(x).derivative.real(); }
    // (1 - x^2) u'(x)
    Real flux(const Abscissa<Real>& x) const { return x.weight() * derivative(x); }

    // Samples of the value and of (1 - x^2) u' at every node of the grid.
    struct Samples
    {
        GridFunction<Real> value;
        GridFunction<Real> flux;
    };

    Samples sample(const SincGrid<Real>& grid) const
    {
        if (!(grid.mesh() == mesh_))
            throw DimensionMismatch("sinc grid was built on a different mesh");
        Samples s{grid.make_function(), grid.make_function()};
        const int K = grid.half_count();
        for (int i = 0; i < grid.intervals(); ++i)
            for (int j = -K; j <= K; ++j)
            {
                const auto x = grid.abscissa(i, j);
                const auto v = evaluate_on(i, x);
                s.value.at(i, j) = v.value.real();
                s.flux.at(i, j) = x.weight() * v.derivative.real();
            }
        return s;
    }

    // lim (1 - x^2) u' at x -> -1 and x -> +1.
    Complex<Real> left_flux() const
    {
        const auto lim = endpoint_limits(degrees_.front());
        return a_.front() * lim.p_left + b_.front() * lim.q_left;
    }
    Complex<Real> right_flux() const
    {
        const auto lim = endpoint_limits(degrees_.back());
        return a_.back() * lim.p_right + b_.back() * lim.q_right;
    }

private:
    Mesh<Real> mesh_;
    std::vector<Complex<Real>> a_, b_;
    std::vector<Degree<Real>> degrees_;
    SolutionKind kind_ = SolutionKind::Eigenfunction;
};

// Phi(lambda): flux at x = -1 of the solution that equals P_nu on the last
// interval. Its zeros are the eigenvalues of the basic problem.
template <typename Real>
Real characteristic(Real lambda, const PiecewiseConstantCoeff<Real>& qbar)
{
    const auto t = transfer_coefficients(lambda, qbar, Complex<Real>(1), Complex<Real>(0));
    const auto lim = endpoint_limits(t.degrees.front());
    const Complex<Real> term_a = t.a.front() * lim.p_left;
    const Complex<Real> term_b = t.b.front() * lim.q_left;
    const Complex<Real> phi = term_a + term_b;
    const Real scale = std::abs(term_a) + std::abs(term_b);
    if (std::abs(phi.imag()) > Real(1e-8) * scale)
        throw NumericalError("characteristic function has a non-negligible imaginary part");
    return phi.real();
}

template <typename Real>
struct Bracket
{
    Real lo;
    Real hi;
};

// Sign-change brackets of Phi for eigenvalues 0..n_max, scanning upward from
// just below min(qbar). The step grows with the expected gap
// 2(n+1) - 2 max|qbar| and is halved on failure.
template <typename Real>
std::vector<Bracket<Real>> bracket_eigenvalues(const PiecewiseConstantCoeff<Real>& qbar, int n_max)
{
    if (n_max < 0)
        throw InvalidParameter("n_max must be non-negative");
    const Real qmax = qbar.max_abs();
    const Real limit = Real(n_max + 2) * Real(n_max + 3) + qmax;
    const Real start = qbar.min_value() - Real(0.5);

    for (int attempt = 0; attempt < 5; ++attempt)
    {
        const Real scale = std::ldexp(Real(1), -attempt);
        std::vector<Bracket<Real>> out;
        Real lo = start;
        Real f_lo = characteristic(lo, qbar);
        while (static_cast<int>(out.size()) <= n_max && lo < limit)
        {
            const Real n = Real(out.size());
            const Real step = scale * std::min(Real(1), std::max(Real(0.25), Real(2) * n - Real(2) * qmax));
            const Real hi = lo + step;
            const Real f_hi = characteristic(hi, qbar);
            if (f_hi == Real(0))
            {
                // land exactly on a root: widen so the root is interior
                const Real hi2 = hi + step / Real(4);
                out.push_back({lo, hi2});
                lo = hi2;
                f_lo = characteristic(lo, qbar);
                continue;
            }
            if ((f_lo < Real(0)) != (f_hi < Real(0)))
                out.push_back({lo, hi});
            lo = hi;
            f_lo = f_hi;
        }
        if (static_cast<int>(out.size()) > n_max)
            return out;
    }
    throw BracketFailure("found fewer than " + std::to_string(n_max + 1) + " eigenvalues below "
                         + std::to_string(static_cast<double>(limit)));
}

// Bisection of Phi inside a bracket down to width tol * max(1, |lambda|).
template <typename Real>
Real bisect_eigenvalue(const PiecewiseConstantCoeff<Real>& qbar, Bracket<Real> br, Real tol)
{
    Real lo = br.lo, hi = br.hi;
    const bool lo_negative = characteristic(lo, qbar) < Real(0);
    for (int it = 0; it < 400; ++it)
    {
        const Real mid = lo + (hi - lo) / Real(2);
        if (hi - lo <= tol * std::max(Real(1), std::abs(mid)) || mid == lo || mid == hi)
            break;
        const Real f = characteristic(mid, qbar);
        if (f == Real(0))
            return mid;
        if ((f < Real(0)) == lo_negative)
            lo = mid;
        else
            hi = mid;
    }
    return lo + (hi - lo) / Real(2);
}

// Lowest n_max + 1 eigenvalues of the basic problem.
template <typename Real>
std::vector<Real> basic_spectrum(const PiecewiseConstantCoeff<Real>& qbar, int n_max, Real tol = Real(1e-13))
{
    const auto brackets = bracket_eigenvalues(qbar, n_max);
    std::vector<Real> out;
    out.reserve(static_cast<std::size_t>(n_max) + 1);
    for (int k = 0; k <= n_max; ++k)
        out.push_back(bisect_eigenvalue(qbar, brackets[k], tol));
    return out;
}

// M_n = max{(lambda_n - lambda_{n-1})^-1, (lambda_{n+1} - lambda_n)^-1}; M_0 uses the upper gap only.
template <typename Real>
Real reciprocal_gap(const std::vector<Real>& spectrum, int n)
{
    const Real upper = Real(1) / (spectrum.at(n + 1) - spectrum.at(n));
    if (n == 0)
        return upper;
    return std::max(Real(1) / (spectrum.at(n) - spectrum.at(n - 1)), upper);
}

template <typename Real>
struct BasicEigenpair
{
    int index = 0;
    Real lambda0 = 0;
    PiecewiseLegendreFunction<Real> eigenfunction;
    PiecewiseLegendreFunction<Real> second;
    Real norm_sq = 0;  // int (u^(0))^2
    Real gap_m = 0;    // M_n
    std::vector<Real> spectrum; // lambda_0^(0) .. lambda_{n+1}^(0)
};

template <typename Real>
BasicEigenpair<Real> solve_basic(int n, const PiecewiseConstantCoeff<Real>& qbar, const SincGrid<Real>& grid,
                                 Real tol = Real(1e-13))
{
    if (n < 0)
        throw InvalidParameter("eigenvalue index must be non-negative");
    if (!(tol >= Real(1e-14)))
        throw InvalidParameter("bisection tolerance must be at least 1e-14");

    const auto brackets = bracket_eigenvalues(qbar, n + 1);
    BasicEigenpair<Real> e;
    e.index = n;
    e.spectrum.assign(static_cast<std::size_t>(n) + 2, Real(0));
    for (int k = std::max(0, n - 1); k <= n + 1; ++k)
        e.spectrum[k] = bisect_eigenvalue(qbar, brackets[k], tol);
    e.lambda0 = e.spectrum[n];
    e.gap_m = reciprocal_gap(e.spectrum, n);

    e.eigenfunction = PiecewiseLegendreFunction<Real>(
        qbar.mesh, transfer_coefficients(e.lambda0, qbar, Complex<Real>(1), Complex<Real>(0)), SolutionKind::Eigenfunction);
    e.second = PiecewiseLegendreFunction<Real>(
        qbar.mesh, transfer_coefficients(e.lambda0, qbar, Complex<Real>(0), Complex<Real>(1)), SolutionKind::SecondSolution);

    const auto u = e.eigenfunction.sample(grid).value;
    e.norm_sq = inner_product(grid, u, u);
    if (!(e.norm_sq >= Real(1e-12)))
        throw NormDegenerate("eigenfunction norm is degenerate");
    return e;
}

} // namespace slfd
