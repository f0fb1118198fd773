#pragma once

// Mesh of [-1, 1] aligned to the discontinuities of the potential, and the
// piecewise-constant approximation qbar of q on it.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "slfd/errors.hpp"
#include "slfd/exprparse.hpp"

namespace slfd
{

// -1 = x_0 < x_1 < ... < x_N = 1
template <typename Real>
class Mesh
{
public:
    Mesh() : points_{Real(-1), Real(1)} {}

    explicit Mesh(std::vector<Real> points) : points_(std::move(points))
    {
        if (points_.size() < 2 || points_.front() != Real(-1) || points_.back() != Real(1))
            throw InvalidParameter("mesh must start at -1 and end at 1");
        for (std::size_t i = 1; i < points_.size(); ++i)
            if (!(points_[i - 1] < points_[i]))
                throw InvalidParameter("mesh points must be strictly increasing");
    }

    int intervals() const { return static_cast<int>(points_.size()) - 1; }
    const std::vector<Real>& points() const { return points_; }
    // Left and right end of interval i (0-based).
    Real left(int i) const { return points_[i]; }
    Real right(int i) const { return points_[i + 1]; }
    Real width(int i) const { return points_[i + 1] - points_[i]; }

    Real max_step() const
    {
        Real h = 0;
        for (int i = 0; i < intervals(); ++i)
            h = std::max(h, width(i));
        return h;
    }

    // Interval containing x; interior mesh points belong to the interval on their right.
    int locate(Real x) const
    {
        auto it = std::upper_bound(points_.begin() + 1, points_.end() - 1, x);
        return static_cast<int>(it - points_.begin()) - 1;
    }

    bool operator==(const Mesh&) const = default;

private:
    std::vector<Real> points_;
};

// Uniform N-interval mesh with every breakpoint inserted as an exact mesh
// point. A uniform point lying within 1e-10 of a breakpoint is replaced by it,
// so breakpoints on the uniform lattice do not create sliver intervals.
template <typename Real>
Mesh<Real> build_mesh(int n, const std::vector<Real>& breakpoints = {})
{
    if (n < 1)
        throw InvalidParameter("mesh needs at least one interval");
    std::vector<Real> pts;
    pts.reserve(static_cast<std::size_t>(n) + 1 + breakpoints.size());
    for (int i = 0; i <= n; ++i)
        pts.push_back(Real(2 * i - n) / Real(n));

    const Real snap = Real(1e-10);
    for (Real b : breakpoints)
    {
        if (!(b > Real(-1) && b < Real(1)))
            throw InvalidParameter("breakpoint " + std::to_string(static_cast<double>(b)) + " is not inside (-1, 1)");
        auto nearest = std::min_element(pts.begin() + 1, pts.end() - 1,
                                        [b](Real u, Real v) { return std::abs(u - b) < std::abs(v - b); });
        if (nearest != pts.end() - 1 && std::abs(*nearest - b) <= snap)
            *nearest = b;
        else
            pts.push_back(b);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return Mesh<Real>(std::move(pts));
}

// q(x) together with the abscissae where it is singular or discontinuous.
template <typename Real>
struct Potential
{
    std::function<Real(Real)> fn;
    std::vector<Real> breakpoints;
    std::string text;
    bool analytic_pieces = true;

    Real operator()(Real x) const { return fn(x); }

    static Potential from_text(const std::string& source, std::vector<Real> breakpoints = {})
    {
        Expr e = parse(source);
        Potential p;
        p.fn = [e](Real x) { return e.evaluate<Real>(x); };
        p.breakpoints = std::move(breakpoints);
        p.text = source;
        return p;
    }

    static Potential constant(Real c)
    {
        Potential p;
        p.fn = [c](Real) { return c; };
        p.text = std::to_string(static_cast<double>(c));
        return p;
    }
};

enum class CoeffRule
{
    Midpoint,
    EndpointAverage,
};

template <typename Real>
struct PiecewiseConstantCoeff
{
    Mesh<Real> mesh;
    std::vector<Real> values; // qbar_i on [x_{i-1}, x_i)

    Real operator()(Real x) const { return values[mesh.locate(x)]; }
    Real max_abs() const
    {
        Real m = 0;
        for (Real v : values)
            m = std::max(m, std::abs(v));
        return m;
    }
    Real min_value() const { return *std::min_element(values.begin(), values.end()); }
    Real mean() const
    {
        Real s = 0;
        for (int i = 0; i < mesh.intervals(); ++i)
            s += values[i] * mesh.width(i);
        return s / Real(2);
    }
};

template <typename Real>
PiecewiseConstantCoeff<Real> constant_coefficient(const Mesh<Real>& mesh, Real c)
{
    return {mesh, std::vector<Real>(mesh.intervals(), c)};
}

namespace detail
{

template <typename Real>
Real checked_sample(const Potential<Real>& q, Real x)
{
    Real v;
    try
    {
        v = q(x);
    }
    catch (const NonFinite&)
    {
        throw EvaluationError("potential is not finite at x = " + std::to_string(static_cast<double>(x))
                              + " (undeclared singular point?)");
    }
    if (!std::isfinite(v))
        throw EvaluationError("potential is not finite at x = " + std::to_string(static_cast<double>(x))
                              + " (undeclared singular point?)");
    return v;
}

} // namespace detail

template <typename Real>
PiecewiseConstantCoeff<Real> approximate_coefficient(const Potential<Real>& q, const Mesh<Real>& mesh,
                                                     CoeffRule rule = CoeffRule::Midpoint)
{
    PiecewiseConstantCoeff<Real> c{mesh, {}};
    c.values.reserve(mesh.intervals());
    for (int i = 0; i < mesh.intervals(); ++i)
    {
        const Real a = mesh.left(i), b = mesh.right(i);
        if (rule == CoeffRule::Midpoint)
        {
            c.values.push_back(detail::checked_sample(q, (a + b) / Real(2)));
        }
        else
        {
            // one-sided limits q(a+), q(b-)
            const Real qa = detail::checked_sample(q, std::nextafter(a, b));
            const Real qb = detail::checked_sample(q, std::nextafter(b, a));
            c.values.push_back((qa + qb) / Real(2));
        }
    }
    return c;
}

template <typename Real>
struct DeviationEstimate
{
    Real value = 0;
    bool reliable = true;
};

// Sampled ||q - qbar||_inf. Samples sit at equispaced points of each interval,
// with the two end samples moved one ulp inside. The estimate is flagged
// unreliable when a sample is non-finite or q grows without bound towards a
// mesh point.
template <typename Real>
DeviationEstimate<Real> sup_deviation(const Potential<Real>& q, const PiecewiseConstantCoeff<Real>& qbar,
                                      int samples_per_interval = 64)
{
    if (samples_per_interval < 16)
        throw InvalidParameter("sup_deviation needs at least 16 samples per interval");
    DeviationEstimate<Real> est;
    const auto& mesh = qbar.mesh;
    auto value_at = [&](Real x, bool& ok) -> Real {
        try
        {
            const Real v = q(x);
            ok = std::isfinite(v);
            return v;
        }
        catch (const EvaluationError&)
        {
            ok = false;
            return Real(0);
        }
    };
    for (int i = 0; i < mesh.intervals(); ++i)
    {
        const Real a = mesh.left(i), b = mesh.right(i), w = mesh.width(i);
        for (int k = 0; k <= samples_per_interval; ++k)
        {
            Real x = a + w * Real(k) / Real(samples_per_interval);
            if (k == 0)
                x = std::nextafter(a, b);
            else if (k == samples_per_interval)
                x = std::nextafter(b, a);
            bool ok = true;
            const Real v = value_at(x, ok);
            if (!ok)
            {
                est.reliable = false;
                continue;
            }
            est.value = std::max(est.value, std::abs(v - qbar.values[i]));
        }
        // growth probe towards both ends
        for (int side = 0; side < 2; ++side)
        {
            const Real end = side == 0 ? a : b;
            const Real dir = side == 0 ? Real(1) : Real(-1);
            bool ok1 = true, ok2 = true;
            const Real v1 = value_at(end + dir * w * Real(1e-6), ok1);
            const Real v2 = value_at(end + dir * w * Real(1e-12), ok2);
            if (!ok1 || !ok2 || std::abs(v2 - v1) > Real(1e-3) * (Real(1) + std::abs(v1)))
                est.reliable = false;
        }
    }
    return est;
}

} // namespace slfd
