#pragma once

// Tanh-rule quadrature and Stenger's sinc indefinite integration on every
// interval of a mesh. Node j of interval [a, b] is
//     z_j = (a + b e^{jh}) / (1 + e^{jh}),   j = -K..K,
// with weight mu_j = (b - a) / (e^{-jh/2} + e^{jh/2})^2, so that
//     int_a^b f  ~  h sum_j f(z_j) mu_j
//     int_a^{z_k} f  ~  h sum_j delta_{k-j} f(z_j) mu_j.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "slfd/coeffmesh.hpp"
#include "slfd/errors.hpp"
#include "slfd/specfun.hpp"

namespace slfd
{

// Values at every node of a SincGrid, interval-major: index i*(2K+1) + (j+K).
template <typename Real>
class GridFunction
{
public:
    GridFunction() = default;
    GridFunction(int intervals, int half_count, Real fill = Real(0))
        : intervals_(intervals), half_count_(half_count),
          values_(static_cast<std::size_t>(intervals) * static_cast<std::size_t>(2 * half_count + 1), fill)
    {
    }

    int intervals() const { return intervals_; }
    int half_count() const { return half_count_; }
    int width() const { return 2 * half_count_ + 1; }
    std::size_t size() const { return values_.size(); }

    Real& at(int i, int j) { return values_[index(i, j)]; }
    Real at(int i, int j) const { return values_[index(i, j)]; }
    Real& operator[](std::size_t k) { return values_[k]; }
    Real operator[](std::size_t k) const { return values_[k]; }

    std::span<Real> interval(int i) { return {values_.data() + static_cast<std::size_t>(i) * width(), static_cast<std::size_t>(width())}; }
    std::span<const Real> interval(int i) const
    {
        return {values_.data() + static_cast<std::size_t>(i) * width(), static_cast<std::size_t>(width())};
    }
    std::span<const Real> values() const { return values_; }
    std::span<Real> values() { return values_; }

    bool same_shape(const GridFunction& o) const { return intervals_ == o.intervals_ && half_count_ == o.half_count_; }

    GridFunction& operator+=(const GridFunction& o)
    {
        require_shape(o);
        for (std::size_t k = 0; k < values_.size(); ++k)
            values_[k] += o.values_[k];
        return *this;
    }

    // this += s * o
    void axpy(Real s, const GridFunction& o)
    {
        require_shape(o);
        for (std::size_t k = 0; k < values_.size(); ++k)
            values_[k] += s * o.values_[k];
    }

    void require_shape(const GridFunction& o) const
    {
        if (!same_shape(o))
            throw DimensionMismatch("grid functions have different shapes");
    }

private:
    std::size_t index(int i, int j) const
    {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(width()) + static_cast<std::size_t>(j + half_count_);
    }

    int intervals_ = 0;
    int half_count_ = 0;
    std::vector<Real> values_;
};

template <typename Real>
class SincGrid
{
public:
    const Mesh<Real>& mesh() const { return mesh_; }
    int intervals() const { return mesh_.intervals(); }
    int half_count() const { return half_count_; }
    int width() const { return 2 * half_count_ + 1; }
    Real step() const { return step_; }

    Real node(int i, int j) const { return z_[index(i, j)]; }
    Real weight(int i, int j) const { return mu_[index(i, j)]; }
    // Node with exact distances to +-1.
    Abscissa<Real> abscissa(int i, int j) const
    {
        const std::size_t k = index(i, j);
        return {z_[k], one_minus_[k], one_plus_[k]};
    }

    // Node moved strictly inside its interval. Nodes close to an interior
    // mesh point round onto it in floating point; evaluating a potential
    // there would hit a declared singularity.
    Real interior_node(int i, int j) const
    {
        const Real z = node(i, j), a = mesh_.left(i), b = mesh_.right(i);
        if (z <= a)
            return std::nextafter(a, b);
        if (z >= b)
            return std::nextafter(b, a);
        return z;
    }

    // delta_l, l = -2K..2K
    Real delta(int l) const { return delta_[static_cast<std::size_t>(l + 2 * half_count_)]; }

    GridFunction<Real> make_function(Real fill = Real(0)) const { return GridFunction<Real>(intervals(), half_count_, fill); }

    template <typename F>
    GridFunction<Real> sample(F&& f) const
    {
        GridFunction<Real> g = make_function();
        for (int i = 0; i < intervals(); ++i)
            for (int j = -half_count_; j <= half_count_; ++j)
                g.at(i, j) = f(interior_node(i, j));
        return g;
    }

    static SincGrid build(const Mesh<Real>& mesh, int half_count, std::optional<Real> step);

private:
    std::size_t index(int i, int j) const
    {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(width()) + static_cast<std::size_t>(j + half_count_);
    }

    Mesh<Real> mesh_;
    int half_count_ = 0;
    Real step_ = 0;
    std::vector<Real> z_, one_minus_, one_plus_, mu_;
    std::vector<Real> delta_;
};

template <typename Real>
SincGrid<Real> SincGrid<Real>::build(const Mesh<Real>& mesh, int half_count, std::optional<Real> step)
{
    if (half_count < 8)
        throw InvalidParameter("sinc half count K must be at least 8");
    SincGrid<Real> g;
    g.mesh_ = mesh;
    g.half_count_ = half_count;
    g.step_ = step ? *step : std::sqrt(Real(2) * std::numbers::pi_v<Real> / Real(half_count));
    if (!(g.step_ > Real(0)))
        throw InvalidParameter("sinc step must be positive");

    const std::size_t total = static_cast<std::size_t>(mesh.intervals()) * static_cast<std::size_t>(g.width());
    g.z_.resize(total);
    g.one_minus_.resize(total);
    g.one_plus_.resize(total);
    g.mu_.resize(total);

    for (int i = 0; i < mesh.intervals(); ++i)
    {
        const Real a = mesh.left(i), b = mesh.right(i), w = b - a;
        const Real ea = Real(1) + a; // distance of a from -1
        const Real eb = Real(1) - b; // distance of b from +1
        for (int j = -half_count; j <= half_count; ++j)
        {
            const std::size_t k = g.index(i, j);
            const Real e = std::exp(-Real(std::abs(j)) * g.step_); // e^{-|j|h}
            const Real small = e / (Real(1) + e);                 // fraction of w on the near side
            const Real large = Real(1) / (Real(1) + e);
            g.mu_[k] = w * e / ((Real(1) + e) * (Real(1) + e));
            if (j == 0)
            {
                g.z_[k] = (a + b) / Real(2);
                g.one_plus_[k] = ea + w / Real(2);
                g.one_minus_[k] = eb + w / Real(2);
            }
            else if (j > 0)
            {
                const Real to_b = w * small;
                g.z_[k] = b - to_b;
                g.one_minus_[k] = eb + to_b;
                g.one_plus_[k] = ea + w * large;
            }
            else
            {
                const Real from_a = w * small;
                g.z_[k] = a + from_a;
                g.one_plus_[k] = ea + from_a;
                g.one_minus_[k] = eb + w * large;
            }
        }
    }

    g.delta_.resize(static_cast<std::size_t>(4 * half_count + 1));
    for (int l = 0; l <= 2 * half_count; ++l)
    {
        const Real d = stenger_delta<Real>(l);
        g.delta_[static_cast<std::size_t>(2 * half_count + l)] = d;
        g.delta_[static_cast<std::size_t>(2 * half_count - l)] = Real(1) - d;
    }
    g.delta_[static_cast<std::size_t>(2 * half_count)] = Real(0.5);
    return g;
}

// step defaults to sqrt(2 pi / K).
template <typename Real>
SincGrid<Real> build_grid(const Mesh<Real>& mesh, int half_count, std::optional<Real> step = std::nullopt)
{
    return SincGrid<Real>::build(mesh, half_count, step);
}

// h * sum_{i,j} f(z_ij) mu_ij over the whole of [-1, 1].
template <typename Real>
Real integrate(const SincGrid<Real>& grid, const GridFunction<Real>& f)
{
    if (f.intervals() != grid.intervals() || f.half_count() != grid.half_count())
        throw DimensionMismatch("samples do not match the sinc grid");
    const int K = grid.half_count();
    Real sum = 0;
    for (int i = 0; i < grid.intervals(); ++i)
        for (int j = -K; j <= K; ++j)
            sum += f.at(i, j) * grid.weight(i, j);
    return grid.step() * sum;
}

// Tanh rule on a single interval.
template <typename Real>
Real integrate_interval(const SincGrid<Real>& grid, int i, std::span<const Real> f)
{
    const int K = grid.half_count();
    if (f.size() != static_cast<std::size_t>(grid.width()))
        throw DimensionMismatch("interval samples do not match the sinc grid");
    Real sum = 0;
    for (int j = -K; j <= K; ++j)
        sum += f[static_cast<std::size_t>(j + K)] * grid.weight(i, j);
    return grid.step() * sum;
}

// Stenger's formula on interval i: result[k+K] ~ int_{x_{i-1}}^{z_ik} f.
template <typename Real>
std::vector<Real> indefinite_integrate(const SincGrid<Real>& grid, int i, std::span<const Real> f)
{
    const int K = grid.half_count();
    if (f.size() != static_cast<std::size_t>(grid.width()))
        throw DimensionMismatch("interval samples do not match the sinc grid");
    std::vector<Real> weighted(f.size());
    for (int l = -K; l <= K; ++l)
        weighted[static_cast<std::size_t>(l + K)] = f[static_cast<std::size_t>(l + K)] * grid.weight(i, l);
    std::vector<Real> out(f.size());
    for (int k = -K; k <= K; ++k)
    {
        Real s = 0;
        for (int l = -K; l <= K; ++l)
            s += grid.delta(k - l) * weighted[static_cast<std::size_t>(l + K)];
        out[static_cast<std::size_t>(k + K)] = grid.step() * s;
    }
    return out;
}

// Running integral int_{-1}^{z} f over all nodes, chaining intervals. The
// carry into interval i is the Stenger value at its predecessor's last node.
template <typename Real>
GridFunction<Real> cumulative_integral(const SincGrid<Real>& grid, const GridFunction<Real>& f)
{
    if (f.intervals() != grid.intervals() || f.half_count() != grid.half_count())
        throw DimensionMismatch("samples do not match the sinc grid");
    GridFunction<Real> out = grid.make_function();
    Real carry = 0;
    for (int i = 0; i < grid.intervals(); ++i)
    {
        const auto part = indefinite_integrate(grid, i, f.interval(i));
        auto dst = out.interval(i);
        for (std::size_t k = 0; k < part.size(); ++k)
            dst[k] = part[k] + carry;
        carry = dst.back();
    }
    return out;
}

// Discrete L2 inner product and norm induced by the tanh rule.
template <typename Real>
Real inner_product(const SincGrid<Real>& grid, const GridFunction<Real>& f, const GridFunction<Real>& g)
{
    f.require_shape(g);
    const int K = grid.half_count();
    Real sum = 0;
    for (int i = 0; i < grid.intervals(); ++i)
        for (int j = -K; j <= K; ++j)
            sum += f.at(i, j) * g.at(i, j) * grid.weight(i, j);
    return grid.step() * sum;
}

template <typename Real>
Real l2_norm(const SincGrid<Real>& grid, const GridFunction<Real>& f)
{
    return std::sqrt(inner_product(grid, f, f));
}

} // namespace slfd
