#pragma once

// Legendre functions of the first and second kind (Ferrers normalization) of
// arbitrary real or complex degree on the cut (-1, 1), plus the sine integral
// used by the sinc indefinite-integration table.
//
// Every routine is written against a floating type `Real`; nothing assumes
// `double`, so a wider type can be substituted without touching a formula.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "slfd/errors.hpp"

namespace slfd
{

template <typename Real>
using Complex = std::complex<Real>;

// A point of (-1, 1) carried together with its distances to the endpoints.
// Quadrature nodes crowd the endpoints far closer than `Real` can resolve
// around +-1, so 1 - x and 1 + x must be kept separately.
template <typename Real>
struct Abscissa
{
    Real x;
    Real one_minus; // 1 - x
    Real one_plus;  // 1 + x

    Abscissa() = default;
    explicit Abscissa(Real x_) : x(x_), one_minus(Real(1) - x_), one_plus(Real(1) + x_) {}
    Abscissa(Real x_, Real one_minus_, Real one_plus_) : x(x_), one_minus(one_minus_), one_plus(one_plus_) {}

    // 1 - x^2 without cancellation
    Real weight() const { return one_minus * one_plus; }
};

// Degree nu of P_nu, Q_nu. Either real, or on the line Re nu = -1/2.
template <typename Real>
struct Degree
{
    Complex<Real> value;

    Degree() = default;
    explicit Degree(Complex<Real> v) : value(v) {}
    explicit Degree(Real v) : value(v, Real(0)) {}

    // Root of nu(nu+1) = lambda - qbar with Re nu >= -1/2 (principal square root).
    static Degree from_lambda(Real lambda, Real qbar)
    {
        const Real disc = Real(1) + Real(4) * (lambda - qbar);
        if (disc >= Real(0))
            return Degree((std::sqrt(disc) - Real(1)) / Real(2));
        return Degree(Complex<Real>(Real(-0.5), std::sqrt(-disc) / Real(2)));
    }

    bool is_real() const { return value.imag() == Real(0); }
};

template <typename Real>
struct FunctionValuePair
{
    Complex<Real> p;
    Complex<Real> p_prime;
    Complex<Real> q;
    Complex<Real> q_prime;
};

// lim (1-x^2) dP/dx and lim (1-x^2) dQ/dx at both endpoints.
template <typename Real>
struct EndpointLimits
{
    Complex<Real> p_left;
    Complex<Real> p_right;
    Complex<Real> q_left;
    Complex<Real> q_right;
};

template <typename Real>
EndpointLimits<Real> endpoint_limits(const Degree<Real>& nu)
{
    const Real pi = std::numbers::pi_v<Real>;
    const Complex<Real> arg = pi * nu.value;
    return {Real(2) * std::sin(arg) / pi, Complex<Real>(0), std::cos(arg), Complex<Real>(1)};
}

// Digamma for complex argument: reflection, upward shift, Stirling tail.
template <typename Real>
Complex<Real> digamma(Complex<Real> z)
{
    const Real pi = std::numbers::pi_v<Real>;
    if (z.real() < Real(0.5))
    {
        const Complex<Real> piz = pi * z;
        return digamma(Complex<Real>(1) - z) - pi * std::cos(piz) / std::sin(piz);
    }
    Complex<Real> shift(0);
    while (std::abs(z) < Real(20))
    {
        shift -= Real(1) / z;
        z += Real(1);
    }
    // B_2k / (2k)
    static constexpr long double tail[] = {
        1.0L / 12.0L,    -1.0L / 120.0L,        1.0L / 252.0L,  -1.0L / 240.0L,
        1.0L / 132.0L,   -691.0L / 32760.0L,    1.0L / 12.0L,   -3617.0L / 8160.0L,
    };
    const Complex<Real> inv2 = Real(1) / (z * z);
    Complex<Real> acc(0);
    for (int k = 7; k >= 0; --k)
        acc = (acc + Real(tail[k])) * inv2;
    return shift + std::log(z) - Real(0.5) / z - acc;
}

namespace detail
{

// P, Q and d/dy at y = 1 - 2t from the hypergeometric series about y = 1:
//   P = sum a_k t^k,                 a_k = (-nu)_k (nu+1)_k / (k!)^2
//   Q = P [ln((1+y)/(1-y))/2 - gamma - psi(nu+1)] + sum a_k H_k t^k
template <typename Real>
FunctionValuePair<Real> legendre_series(Complex<Real> nu, Real one_minus, Real one_plus)
{
    const Real eps = std::numeric_limits<Real>::epsilon() / Real(2);
    const Real t = one_minus / Real(2);
    const Real kmin = std::abs(nu) + Real(2);
    constexpr int max_terms = 4000;

    Complex<Real> a(1), P(1), dP(0), S(0), dS(0);
    Real tk = 1, H = 0, peak = 1;
    bool converged = false;
    for (int k = 1; k <= max_terms; ++k)
    {
        const Real kr = Real(k);
        a *= (kr - Real(1) - nu) * (kr + nu) / (kr * kr);
        H += Real(1) / kr;
        const Real tkm1 = tk;
        tk *= t;
        const Complex<Real> term = a * tk;
        const Complex<Real> dterm = a * (kr * tkm1);
        P += term;
        S += term * H;
        dP += dterm;
        dS += dterm * H;

        const Real mag = std::abs(term) * (Real(1) + H);
        const Real dmag = std::abs(dterm) * (Real(1) + H);
        peak = std::max(peak, std::max(mag, dmag));
        if (kr > kmin)
        {
            const Real vscale = std::max(std::abs(P) + std::abs(S), eps * peak);
            const Real dscale = std::max(std::abs(dP) + std::abs(dS), eps * peak);
            if (mag <= eps * vscale && dmag <= eps * dscale)
            {
                converged = true;
                break;
            }
        }
    }
    if (!converged)
        throw NonConvergence("Legendre series did not converge (degree or argument outside supported range)");

    const Complex<Real> L = std::log(one_plus / one_minus) / Real(2) - std::numbers::egamma_v<Real>
                            - digamma(nu + Real(1));
    const Real w = one_minus * one_plus;
    FunctionValuePair<Real> r;
    r.p = P;
    r.p_prime = -dP / Real(2);
    r.q = P * L + S;
    r.q_prime = r.p_prime * L + P / w - dS / Real(2);
    return r;
}

// Same quantities for real degree nu >= 1 by upward recurrence in the degree
// from nu - floor(nu), which keeps the series in its benign range.
template <typename Real>
FunctionValuePair<Real> legendre_recurrence(Real nu, Real y, Real one_minus, Real one_plus)
{
    const int steps = static_cast<int>(std::floor(nu));
    const Real mu0 = nu - Real(steps);
    const auto f0 = legendre_series<Real>(Complex<Real>(mu0), one_minus, one_plus);
    const auto f1 = legendre_series<Real>(Complex<Real>(mu0 + Real(1)), one_minus, one_plus);

    Complex<Real> p_prev = f0.p, p_cur = f1.p;
    Complex<Real> q_prev = f0.q, q_cur = f1.q;
    Real mu = mu0 + Real(1);
    for (int s = 1; s < steps; ++s)
    {
        const Real c1 = (Real(2) * mu + Real(1)) / (mu + Real(1));
        const Real c0 = mu / (mu + Real(1));
        const Complex<Real> p_next = c1 * y * p_cur - c0 * p_prev;
        const Complex<Real> q_next = c1 * y * q_cur - c0 * q_prev;
        p_prev = p_cur;
        p_cur = p_next;
        q_prev = q_cur;
        q_cur = q_next;
        mu += Real(1);
    }
    // (1 - y^2) f'_nu = nu (f_{nu-1} - y f_nu)
    const Real w = one_minus * one_plus;
    FunctionValuePair<Real> r;
    r.p = p_cur;
    r.q = q_cur;
    r.p_prime = nu * (p_prev - y * p_cur) / w;
    r.q_prime = nu * (q_prev - y * q_cur) / w;
    return r;
}

// y in [0, 1), Re nu >= -1/2
template <typename Real>
FunctionValuePair<Real> legendre_right_half(Complex<Real> nu, Real y, Real one_minus, Real one_plus)
{
    const Real t = one_minus / Real(2);
    if (nu.imag() == Real(0) && nu.real() >= Real(1) && nu.real() * std::sqrt(t) > Real(1.5))
        return legendre_recurrence<Real>(nu.real(), y, one_minus, one_plus);
    return legendre_series<Real>(nu, one_minus, one_plus);
}

} // namespace detail

// P_nu, P_nu', Q_nu, Q_nu' at x in (-1, 1).
template <typename Real>
FunctionValuePair<Real> legendre_pair(const Degree<Real>& degree, const Abscissa<Real>& x)
{
    if (!(x.one_minus > Real(0) && x.one_plus > Real(0)))
        throw DomainError("Legendre functions are evaluated only on (-1, 1)");

    const Real pi = std::numbers::pi_v<Real>;
    Complex<Real> nu = degree.value;

    // P_nu = P_{-nu-1};  Q_nu = Q_{-nu-1} - pi cot(pi (-nu-1)) P_{-nu-1}
    bool mirrored = false;
    if (nu.real() < Real(-0.5))
    {
        nu = -nu - Real(1);
        mirrored = true;
    }

    FunctionValuePair<Real> r;
    if (x.x >= Real(0))
    {
        r = detail::legendre_right_half<Real>(nu, x.x, x.one_minus, x.one_plus);
    }
    else
    {
        // P_nu(-y) = cos(pi nu) P_nu(y) - (2/pi) sin(pi nu) Q_nu(y)
        // Q_nu(-y) = -cos(pi nu) Q_nu(y) - (pi/2) sin(pi nu) P_nu(y)
        const auto m = detail::legendre_right_half<Real>(nu, -x.x, x.one_plus, x.one_minus);
        const Complex<Real> c = std::cos(pi * nu);
        const Complex<Real> s = std::sin(pi * nu);
        r.p = c * m.p - (Real(2) / pi) * s * m.q;
        r.q = -c * m.q - (pi / Real(2)) * s * m.p;
        r.p_prime = -(c * m.p_prime - (Real(2) / pi) * s * m.q_prime);
        r.q_prime = c * m.q_prime + (pi / Real(2)) * s * m.p_prime;
    }

    if (mirrored)
    {
        const Complex<Real> cot = std::cos(pi * nu) / std::sin(pi * nu);
        r.q -= pi * cot * r.p;
        r.q_prime -= pi * cot * r.p_prime;
    }
    return r;
}

template <typename Real>
FunctionValuePair<Real> legendre_pair(const Degree<Real>& degree, Real x)
{
    return legendre_pair(degree, Abscissa<Real>(x));
}

// Si(x) = int_0^x sin(t)/t dt. Power series for |x| <= 4, otherwise the
// continued fraction for E1(ix) evaluated by the modified Lentz method.
template <typename Real>
Real sine_integral(Real x)
{
    if (x < Real(0))
        return -sine_integral(-x);
    const Real eps = std::numeric_limits<Real>::epsilon();
    if (x <= Real(4))
    {
        Real sum = 0, term = x; // x^(2k+1) / (2k+1)!
        for (int k = 0; k < 200; ++k)
        {
            const Real add = term / Real(2 * k + 1);
            sum += add;
            if (std::abs(add) <= eps * std::abs(sum) / Real(4))
                break;
            term *= -x * x / (Real(2 * k + 2) * Real(2 * k + 3));
        }
        return sum;
    }
    const Real tiny = std::numeric_limits<Real>::min() * Real(1e4);
    Complex<Real> b(1, x);
    Complex<Real> c = Real(1) / Complex<Real>(tiny);
    Complex<Real> d = Real(1) / b;
    Complex<Real> h = d;
    for (int i = 2; i < 100000; ++i)
    {
        const Real a = -Real(i - 1) * Real(i - 1);
        b += Real(2);
        d = Real(1) / (a * d + b);
        c = b + a / c;
        const Complex<Real> del = c * d;
        h *= del;
        if (std::abs(del.real() - Real(1)) + std::abs(del.imag()) <= eps)
            break;
    }
    h *= Complex<Real>(std::cos(x), -std::sin(x));
    return std::numbers::pi_v<Real> / Real(2) + h.imag();
}

// delta_k = 1/2 + int_0^k sin(pi t)/(pi t) dt = 1/2 + Si(pi k)/pi.
// Negative k is formed as 1 - delta_{-k} so that delta_k + delta_{-k} == 1.
template <typename Real>
Real stenger_delta(long k)
{
    if (k < 0)
        return Real(1) - stenger_delta<Real>(-k);
    const Real pi = std::numbers::pi_v<Real>;
    return Real(0.5) + sine_integral(pi * Real(k)) / pi;
}

} // namespace slfd
