#pragma once

// Rank-m correction series for an eigenpair of the basic problem.
//
// Corrections solve
//     [(1 - x^2) u^(d)']' + (lambda0 - qbar) u^(d) = F^(d),
//     F^(d) = -sum_{k<d} lambda^(d-k) u^(k) + (q - qbar) u^(d-1),
// through the kernel w(x) u0(xi) - w(xi) u0(x), with running integrals taken
// by Stenger's formula. Every correction is projected orthogonal to u0.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "slfd/basicsolver.hpp"
#include "slfd/coeffmesh.hpp"
#include "slfd/errors.hpp"
#include "slfd/sincquad.hpp"

namespace slfd
{

// Everything the rank loop reads: samples of u0, w, their fluxes and q - qbar.
template <typename Real>
struct FdProblem
{
    const SincGrid<Real>* grid = nullptr;
    BasicEigenpair<Real> basic;
    GridFunction<Real> u0, u0_flux;
    GridFunction<Real> w, w_flux;
    GridFunction<Real> q_nodes;    // q at the nodes
    GridFunction<Real> qbar_nodes; // qbar at the nodes
    GridFunction<Real> qdiff;      // q - qbar

    Real lambda0() const { return basic.lambda0; }
    Real norm_sq() const { return basic.norm_sq; }
};

template <typename Real>
FdProblem<Real> prepare_problem(const Potential<Real>& q, const PiecewiseConstantCoeff<Real>& qbar,
                                const SincGrid<Real>& grid, BasicEigenpair<Real> basic)
{
    if (!(grid.mesh() == qbar.mesh))
        throw DimensionMismatch("sinc grid and coefficient use different meshes");
    FdProblem<Real> p;
    p.grid = &grid;
    p.basic = std::move(basic);
    auto us = p.basic.eigenfunction.sample(grid);
    auto ws = p.basic.second.sample(grid);
    p.u0 = std::move(us.value);
    p.u0_flux = std::move(us.flux);
    p.w = std::move(ws.value);
    p.w_flux = std::move(ws.flux);
    p.q_nodes = grid.make_function();
    p.qbar_nodes = grid.make_function();
    p.qdiff = grid.make_function();
    const int K = grid.half_count();
    for (int i = 0; i < grid.intervals(); ++i)
        for (int j = -K; j <= K; ++j)
        {
            const Real x = grid.interior_node(i, j);
            const Real v = detail::checked_sample(q, x);
            p.q_nodes.at(i, j) = v;
            p.qbar_nodes.at(i, j) = qbar.values[i];
            p.qdiff.at(i, j) = v - qbar.values[i];
        }
    return p;
}

// lambda^(d) = (h / norm_sq) sum u0 u^(d-1) (q - qbar) mu
template <typename Real>
Real compute_lambda_correction(int d, const GridFunction<Real>& u_prev, const GridFunction<Real>& u0,
                               const GridFunction<Real>& qdiff, const SincGrid<Real>& grid, Real norm_sq)
{
    if (d < 1)
        throw InvalidParameter("correction rank must be at least 1");
    u_prev.require_shape(u0);
    u_prev.require_shape(qdiff);
    const int K = grid.half_count();
    if (u0.intervals() != grid.intervals() || u0.half_count() != K)
        throw DimensionMismatch("samples do not match the sinc grid");
    Real s = 0;
    for (int i = 0; i < grid.intervals(); ++i)
        for (int j = -K; j <= K; ++j)
            s += u0.at(i, j) * u_prev.at(i, j) * qdiff.at(i, j) * grid.weight(i, j);
    return grid.step() * s / norm_sq;
}

// lambdas[k] = lambda^(k) for k = 0..d (entry 0 is unused); u_all[k] = u^(k), k = 0..d-1.
template <typename Real>
GridFunction<Real> compute_rhs(int d, const std::vector<Real>& lambdas, const std::vector<GridFunction<Real>>& u_all,
                               const GridFunction<Real>& qdiff)
{
    if (d < 1)
        throw InvalidParameter("correction rank must be at least 1");
    if (static_cast<int>(lambdas.size()) < d + 1 || static_cast<int>(u_all.size()) < d)
        throw DimensionMismatch("not enough previous corrections for the right-hand side");
    GridFunction<Real> f(qdiff.intervals(), qdiff.half_count());
    for (int k = 0; k < d; ++k)
        f.axpy(-lambdas[d - k], u_all[k]);
    const auto& up = u_all[d - 1];
    up.require_shape(qdiff);
    for (std::size_t k = 0; k < f.size(); ++k)
        f[k] += up[k] * qdiff[k];
    return f;
}

template <typename Real>
struct Correction
{
    GridFunction<Real> value;
    GridFunction<Real> flux; // (1 - x^2) u'
};

// u = w I1 - u0 I2 with I1 = int_{-1}^z u0 F, I2 = int_{-1}^z w F.
template <typename Real>
Correction<Real> compute_eigfun_correction(const GridFunction<Real>& f, const GridFunction<Real>& u0,
                                           const GridFunction<Real>& w, const SincGrid<Real>& grid,
                                           const GridFunction<Real>* u0_flux = nullptr,
                                           const GridFunction<Real>* w_flux = nullptr)
{
    f.require_shape(u0);
    f.require_shape(w);
    if (f.intervals() != grid.intervals() || f.half_count() != grid.half_count())
        throw DimensionMismatch("samples do not match the sinc grid");
    GridFunction<Real> g1 = grid.make_function(), g2 = grid.make_function();
    for (std::size_t k = 0; k < f.size(); ++k)
    {
        g1[k] = u0[k] * f[k];
        g2[k] = w[k] * f[k];
    }
    const auto i1 = cumulative_integral(grid, g1);
    const auto i2 = cumulative_integral(grid, g2);
    Correction<Real> c{grid.make_function(), grid.make_function()};
    for (std::size_t k = 0; k < f.size(); ++k)
        c.value[k] = w[k] * i1[k] - u0[k] * i2[k];
    if (u0_flux && w_flux)
        for (std::size_t k = 0; k < f.size(); ++k)
            c.flux[k] = (*w_flux)[k] * i1[k] - (*u0_flux)[k] * i2[k];
    return c;
}

// Coefficient of the projection of u on u0.
template <typename Real>
Real projection_coefficient(const GridFunction<Real>& u, const GridFunction<Real>& u0, const SincGrid<Real>& grid,
                            Real norm_sq)
{
    return inner_product(grid, u, u0) / norm_sq;
}

template <typename Real>
GridFunction<Real> orthogonalize(const GridFunction<Real>& u, const GridFunction<Real>& u0, const SincGrid<Real>& grid,
                                 Real norm_sq)
{
    GridFunction<Real> out = u;
    out.axpy(-projection_coefficient(u, u0, grid, norm_sq), u0);
    return out;
}

// alpha_j = 2 (2j-1)!! / (2j+2)!!, alpha_0 = 1.
template <typename Real>
Real alpha(int j)
{
    if (j < 0)
        throw InvalidParameter("alpha index must be non-negative");
    Real a = 1;
    // alpha_j / alpha_{j-1} = (2j - 1) / (2j + 2), alpha_1 = 1/4
    for (int k = 1; k <= j; ++k)
        a *= k == 1 ? Real(0.25) : Real(2 * k - 1) / Real(2 * k + 2);
    return a;
}

// C_j = sum_{s<j} C_{j-1-s} C_s, exact for j <= 35.
inline std::uint64_t catalan(int j)
{
    if (j < 0 || j > 35)
        throw InvalidParameter("catalan index out of range");
    std::vector<std::uint64_t> v(static_cast<std::size_t>(j) + 1, 0);
    v[0] = 1;
    for (int k = 1; k <= j; ++k)
        for (int s = 0; s < k; ++s)
            v[k] += v[k - 1 - s] * v[s];
    return v[j];
}

// q_n = 2 ||q|| / n; for n = 0 this is 2 ||q||.
template <typename Real>
Real zero_coefficient_ratio(int n, Real q_sup)
{
    return n == 0 ? Real(2) * q_sup : Real(2) * q_sup / Real(n);
}

// (2n - 2||q||)^-1, meaningful for n > 2||q||.
template <typename Real>
std::optional<Real> asymptotic_gap_bound(int n, Real q_sup)
{
    if (!(Real(n) > Real(2) * q_sup))
        return std::nullopt;
    return Real(1) / (Real(2 * n) - Real(2) * q_sup);
}

enum class BoundStatus
{
    Convergent, // r < 1
    Critical,   // r == 1
    NotApplicable,
};

template <typename Real>
struct ConvergenceBound
{
    Real r_bar = 0;
    Real r = 0;
    Real deviation = 0;
    BoundStatus status = BoundStatus::NotApplicable;

    // Bound on |lambda - lambda~^m|.
    std::optional<Real> eig_bound(int m) const
    {
        switch (status)
        {
        case BoundStatus::Convergent:
            return deviation * std::pow(r, Real(m)) * alpha<Real>(m) / (Real(1) - r);
        case BoundStatus::Critical:
            return deviation * tail(m);
        default:
            return std::nullopt;
        }
    }

    // Bound on ||u - u~^m|| for normalized u0.
    std::optional<Real> fun_bound(int m) const
    {
        switch (status)
        {
        case BoundStatus::Convergent:
            return std::pow(r, Real(m + 1)) * alpha<Real>(m + 1) / (Real(1) - r);
        case BoundStatus::Critical:
            return tail(m + 1);
        default:
            return std::nullopt;
        }
    }

    // Smallest m with eig_bound(m) <= tol, searched up to max_rank.
    std::optional<int> rank_for(Real tol, int max_rank = 200) const
    {
        if (status == BoundStatus::NotApplicable)
            return std::nullopt;
        for (int m = 0; m <= max_rank; ++m)
        {
            const auto b = eig_bound(m);
            if (b && *b <= tol)
                return m;
        }
        return std::nullopt;
    }

    // Upper bound on sum_{j >= m} alpha_j. The alpha series sums to 2, so
    // m = 0, 1 are exact; otherwise alpha_j <= 1/((j+1) sqrt(pi j)) and the
    // sum is bounded by the integral from m - 1: 2/sqrt(pi) arctan(1/sqrt(m-1)).
    static Real tail(int m)
    {
        if (m <= 0)
            return Real(2);
        if (m == 1)
            return Real(1);
        return Real(2) / std::sqrt(std::numbers::pi_v<Real>) * std::atan(Real(1) / std::sqrt(Real(m - 1)));
    }
};

template <typename Real>
ConvergenceBound<Real> apriori_bounds(Real gap_m, Real deviation)
{
    if (!std::isfinite(deviation) || !std::isfinite(gap_m))
        throw InvalidParameter("a-priori bounds need a finite deviation and gap");
    ConvergenceBound<Real> b;
    b.deviation = deviation;
    b.r_bar = gap_m * deviation;
    b.r = Real(4) * b.r_bar;
    if (b.r < Real(1))
        b.status = BoundStatus::Convergent;
    else if (b.r == Real(1))
        b.status = BoundStatus::Critical;
    else
        b.status = BoundStatus::NotApplicable;
    return b;
}

template <typename Real>
struct RankDiagnostics
{
    int rank = 0;
    Real lambda_correction = 0; // lambda^(rank)
    Real lambda_sum = 0;        // lambda~ up to rank
    Real correction_norm = 0;   // ||u^(rank)|| / ||u^(0)||
    Real eta = 0;
    Real eta_bar = 0;
    Real orthogonality = 0;     // |<u^(rank), u0>| / (||u0|| ||u^(rank)||)
};

struct FdWarning
{
    std::string kind;
    std::string message;
};

template <typename Real>
struct FdSolution
{
    int index = 0;
    int rank = 0;
    std::vector<Real> lambda_corrections;      // lambda^(0..m)
    std::vector<Real> correction_norms;        // ||u^(j)||, absolute
    std::vector<GridFunction<Real>> corrections; // u^(0..m)
    std::vector<GridFunction<Real>> fluxes;      // (1 - x^2) u^(j)'
    std::vector<GridFunction<Real>> rhs;         // F^(1..m), entry 0 empty
    GridFunction<Real> eigenfunction;            // sum of the corrections
    GridFunction<Real> eigenfunction_flux;
    std::vector<RankDiagnostics<Real>> diagnostics;
    std::vector<FdWarning> warnings;
    Real norm_sq = 0;
    Real quadrature_floor = 0;

    Real eigenvalue_sum() const
    {
        Real s = 0;
        for (Real l : lambda_corrections)
            s += l;
        return s;
    }
    Real relative_norm(int j) const { return correction_norms.at(j) / std::sqrt(norm_sq); }
};

template <typename Real>
struct FdOptions
{
    int rank = 10;
    std::optional<Real> tol;
    bool residuals_every_rank = true;
};

namespace detail
{

// Error indicator of the tanh rule: halving the step squares the error, so
// the difference between the rules at h and 2h estimates sqrt(err(h)).
template <typename Real>
Real quadrature_floor(const SincGrid<Real>& grid, const GridFunction<Real>& u0, Real norm_sq)
{
    const int K = grid.half_count();
    Real s = 0;
    for (int i = 0; i < grid.intervals(); ++i)
        for (int j = -K; j <= K; ++j)
            if (j % 2 == 0)
                s += u0.at(i, j) * u0.at(i, j) * grid.weight(i, j);
    const Real coarse = Real(2) * grid.step() * s;
    const Real diff = std::abs(coarse - norm_sq) / norm_sq;
    return std::max(diff * diff, std::numeric_limits<Real>::epsilon());
}

} // namespace detail

// eta: L2 norm of (1 - x^2) u~' + int_{-1}^x (lambda~ - q) u~, relative to ||u0||.
template <typename Real>
Real residual_eta(const SincGrid<Real>& grid, const GridFunction<Real>& u, const GridFunction<Real>& flux, Real lambda,
                  const GridFunction<Real>& q_nodes, Real norm_sq)
{
    GridFunction<Real> g = grid.make_function();
    for (std::size_t k = 0; k < g.size(); ++k)
        g[k] = (lambda - q_nodes[k]) * u[k];
    GridFunction<Real> r = cumulative_integral(grid, g);
    r += flux;
    return l2_norm(grid, r) / std::sqrt(norm_sq);
}

// eta_bar: L2 norm of [(1 - x^2) u~']' + (lambda~ - q) u~, relative to ||u0||.
// The outer derivative is taken through the ODE each correction satisfies:
// [(1 - x^2) u^(j)']' = -(lambda0 - qbar) u^(j) + W F^(j) with W the
// normalized Wronskian (1 - x^2)(u0 w' - u0' w).
template <typename Real>
Real residual_eta_bar(const FdProblem<Real>& p, const FdSolution<Real>& sol, int rank, const GridFunction<Real>& q_nodes)
{
    const auto& grid = *p.grid;
    GridFunction<Real> r = grid.make_function();
    Real lambda = 0;
    for (int j = 0; j <= rank; ++j)
        lambda += sol.lambda_corrections[j];
    for (std::size_t k = 0; k < r.size(); ++k)
    {
        Real u = 0, fsum = 0;
        for (int j = 0; j <= rank; ++j)
            u += sol.corrections[j][k];
        for (int j = 1; j <= rank; ++j)
            fsum += sol.rhs[j][k];
        const Real wr = p.w_flux[k] * p.u0[k] - p.u0_flux[k] * p.w[k];
        r[k] = -(p.lambda0() - p.qbar_nodes[k]) * u + wr * fsum + (lambda - q_nodes[k]) * u;
    }
    return l2_norm(grid, r) / std::sqrt(p.norm_sq());
}

template <typename Real>
FdSolution<Real> run_fd(const FdProblem<Real>& p, const FdOptions<Real>& opt)
{
    if (opt.rank < 0)
        throw InvalidParameter("rank must be non-negative");
    const auto& grid = *p.grid;
    const Real norm_sq = p.norm_sq();
    const Real norm = std::sqrt(norm_sq);

    FdSolution<Real> s;
    s.index = p.basic.index;
    s.norm_sq = norm_sq;
    s.lambda_corrections.push_back(p.lambda0());
    s.correction_norms.push_back(l2_norm(grid, p.u0));
    s.corrections.push_back(p.u0);
    s.fluxes.push_back(p.u0_flux);
    s.rhs.emplace_back();
    s.eigenfunction = p.u0;
    s.eigenfunction_flux = p.u0_flux;
    s.quadrature_floor = detail::quadrature_floor(grid, p.u0, norm_sq);

    auto record = [&](int d) {
        RankDiagnostics<Real> diag;
        diag.rank = d;
        diag.lambda_correction = s.lambda_corrections[d];
        diag.lambda_sum = s.eigenvalue_sum();
        diag.correction_norm = s.correction_norms[d] / norm;
        if (opt.residuals_every_rank || d == opt.rank)
        {
            diag.eta = residual_eta(grid, s.eigenfunction, s.eigenfunction_flux, diag.lambda_sum, p.q_nodes, norm_sq);
            diag.eta_bar = residual_eta_bar(p, s, d, p.q_nodes);
        }
        if (d > 0 && s.correction_norms[d] > Real(0))
            diag.orthogonality = std::abs(inner_product(grid, s.corrections[d], p.u0)) / (norm * s.correction_norms[d]);
        s.diagnostics.push_back(diag);
    };
    record(0);

    int rising = 0;
    bool stagnation_reported = false;
    for (int d = 1; d <= opt.rank; ++d)
    {
        const Real lam = compute_lambda_correction(d, s.corrections[d - 1], p.u0, p.qdiff, grid, norm_sq);
        s.lambda_corrections.push_back(lam);
        GridFunction<Real> f = compute_rhs(d, s.lambda_corrections, s.corrections, p.qdiff);
        Correction<Real> c = compute_eigfun_correction(f, p.u0, p.w, grid, &p.u0_flux, &p.w_flux);
        const Real coeff = projection_coefficient(c.value, p.u0, grid, norm_sq);
        c.value.axpy(-coeff, p.u0);
        c.flux.axpy(-coeff, p.u0_flux);

        s.correction_norms.push_back(l2_norm(grid, c.value));
        s.eigenfunction += c.value;
        s.eigenfunction_flux += c.flux;
        s.corrections.push_back(std::move(c.value));
        s.fluxes.push_back(std::move(c.flux));
        s.rhs.push_back(std::move(f));
        s.rank = d;
        record(d);

        if (s.correction_norms[d] > s.correction_norms[d - 1])
            ++rising;
        else
            rising = 0;
        if (rising >= 3 && !stagnation_reported)
        {
            s.warnings.push_back({"StagnationWarning", "correction norm grew for 3 consecutive ranks up to rank "
                                                           + std::to_string(d) + " (n = " + std::to_string(s.index)
                                                           + "); the mesh may be too coarse"});
            stagnation_reported = true;
        }
        if (opt.tol && std::max(std::abs(lam), s.correction_norms[d] / norm) < *opt.tol)
            break;
    }
    return s;
}

// Convenience: basic solve, sampling and rank loop in one call.
template <typename Real>
FdSolution<Real> solve_fd(int n, const Potential<Real>& q, const PiecewiseConstantCoeff<Real>& qbar,
                          const SincGrid<Real>& grid, const FdOptions<Real>& opt, Real bisect_tol = Real(1e-13))
{
    auto basic = solve_basic(n, qbar, grid, bisect_tol);
    const auto p = prepare_problem(q, qbar, grid, std::move(basic));
    return run_fd(p, opt);
}

} // namespace slfd
