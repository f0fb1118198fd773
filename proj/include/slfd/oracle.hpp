#pragma once

// Independent check: Galerkin discretization of
//     -[(1 - x^2) u']' + q u = lambda u
// in orthonormal Legendre polynomials. The stiffness part is diagonal,
// k (k + 1); the potential part is the Gram matrix of q, integrated with a
// composite tanh rule on a mesh that contains the breakpoints of q.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "slfd/coeffmesh.hpp"
#include "slfd/errors.hpp"
#include "slfd/sincquad.hpp"

namespace slfd
{

template <typename Real>
using DenseMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

// Eigenvalues of a symmetric matrix in ascending order; only the lower
// triangle is read.
template <typename Real>
std::vector<Real> symmetric_eigenvalues(const DenseMatrix<Real>& a)
{
    Eigen::SelfAdjointEigenSolver<DenseMatrix<Real>> solver(a, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NonConvergence("symmetric eigenvalue iteration did not converge");
    const auto& ev = solver.eigenvalues();
    return std::vector<Real>(ev.data(), ev.data() + ev.size());
}

template <typename Real>
struct OracleOptions
{
    int pieces = 0;      // mesh intervals for the Gram quadrature; 0 picks modes / 2 (at least 16)
    int half_count = 200;
};

template <typename Real>
struct OracleResult
{
    std::vector<Real> eigenvalues;
    Real orthonormality_defect = 0; // max |int p_k p_l - delta_kl|
};

template <typename Real>
OracleResult<Real> galerkin_oracle(const Potential<Real>& q, int modes, OracleOptions<Real> opt = {})
{
    if (modes < 16)
        throw InvalidParameter("the Galerkin oracle needs at least 16 modes");
    const int pieces = opt.pieces > 0 ? opt.pieces : std::max(16, modes / 2);
    const auto mesh = build_mesh<Real>(pieces, q.breakpoints);
    const auto grid = build_grid(mesh, opt.half_count);
    const int K = grid.half_count();

    // weighted basis values sqrt(h mu) p_k(z) per node
    const std::size_t nodes = static_cast<std::size_t>(grid.intervals()) * static_cast<std::size_t>(grid.width());
    std::vector<Real> basis(nodes * static_cast<std::size_t>(modes));
    std::vector<Real> qv(nodes);
    std::size_t row = 0;
    for (int i = 0; i < grid.intervals(); ++i)
        for (int j = -K; j <= K; ++j, ++row)
        {
            const Real x = grid.interior_node(i, j);
            const Real v = q(x);
            if (!std::isfinite(v))
                throw NonFinite(static_cast<double>(x), q.text);
            qv[row] = v;
            const Real sw = std::sqrt(grid.step() * grid.weight(i, j));
            Real* b = &basis[row * static_cast<std::size_t>(modes)];
            Real p0 = 1, p1 = x;
            b[0] = sw * std::sqrt(Real(0.5));
            if (modes > 1)
                b[1] = sw * std::sqrt(Real(1.5)) * p1;
            for (int k = 2; k < modes; ++k)
            {
                const Real p2 = (Real(2 * k - 1) * x * p1 - Real(k - 1) * p0) / Real(k);
                p0 = p1;
                p1 = p2;
                b[k] = sw * std::sqrt(Real(2 * k + 1) / Real(2)) * p2;
            }
        }

    DenseMatrix<Real> a = DenseMatrix<Real>::Zero(modes, modes);
    DenseMatrix<Real> gram = DenseMatrix<Real>::Zero(modes, modes);
    for (std::size_t r = 0; r < nodes; ++r)
    {
        const Real* b = &basis[r * static_cast<std::size_t>(modes)];
        const Real qr = qv[r];
        for (int k = 0; k < modes; ++k)
        {
            const Real bk = b[k];
            for (int l = k; l < modes; ++l)
            {
                a(k, l) += qr * bk * b[l];
                gram(k, l) += bk * b[l];
            }
        }
    }
    OracleResult<Real> res;
    for (int k = 0; k < modes; ++k)
    {
        for (int l = k; l < modes; ++l)
        {
            a(l, k) = a(k, l);
            res.orthonormality_defect = std::max(res.orthonormality_defect, std::abs(gram(k, l) - (k == l ? Real(1) : Real(0))));
        }
        a(k, k) += Real(k) * Real(k + 1);
    }
    res.eigenvalues = symmetric_eigenvalues(a);
    return res;
}

} // namespace slfd
