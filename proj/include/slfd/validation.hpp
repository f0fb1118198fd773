#pragma once

// Acceptance checks against golden data. Each criterion produces one status
// line plus detail lines with measured and expected values.

#include <chrono>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "slfd/basicsolver.hpp"
#include "slfd/coeffmesh.hpp"
#include "slfd/config.hpp"
#include "slfd/errors.hpp"
#include "slfd/fdengine.hpp"
#include "slfd/oracle.hpp"
#include "slfd/report.hpp"
#include "slfd/sincquad.hpp"

#ifndef SLFD_GOLDEN_DIR
#define SLFD_GOLDEN_DIR "data/golden"
#endif

namespace slfd
{

// CSV with '#' comment lines and a header row; cells hold numeric expressions.
class GoldenTable
{
public:
    static GoldenTable load(const std::filesystem::path& path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open golden file '" + path.string() + "'");
        GoldenTable t;
        t.path_ = path.string();
        std::string line;
        bool header = true;
        while (std::getline(in, line))
        {
            const std::string s = detail::trim(line);
            if (s.empty() || s.front() == '#')
                continue;
            std::vector<std::string> cells;
            std::istringstream row(s);
            std::string cell;
            while (std::getline(row, cell, ','))
                cells.push_back(detail::trim(cell));
            if (header)
            {
                t.columns_ = cells;
                header = false;
                continue;
            }
            if (cells.size() != t.columns_.size())
                throw ConfigError("golden file '" + t.path_ + "': row has " + std::to_string(cells.size())
                                  + " cells, expected " + std::to_string(t.columns_.size()));
            t.rows_.push_back(cells);
        }
        return t;
    }

    std::size_t rows() const { return rows_.size(); }

    const std::string& text(std::size_t r, const std::string& col) const { return rows_.at(r).at(column(col)); }

    double value(std::size_t r, const std::string& col) const
    {
        try
        {
            return evaluate_constant<double>(text(r, col));
        }
        catch (const Error&)
        {
            throw ConfigError("golden file '" + path_ + "': cell '" + text(r, col) + "' is not a number");
        }
    }

    // Row whose `key` column equals v.
    std::size_t find(const std::string& key, double v) const
    {
        for (std::size_t r = 0; r < rows_.size(); ++r)
            if (value(r, key) == v)
                return r;
        throw ConfigError("golden file '" + path_ + "': no row with " + key + " = " + detail::format_real(v));
    }

    // Row whose first column names `key` (for quantity,value tables).
    double lookup(const std::string& key) const
    {
        for (std::size_t r = 0; r < rows_.size(); ++r)
            if (rows_[r].front() == key)
                return value(r, columns_.at(1));
        throw ConfigError("golden file '" + path_ + "': no entry '" + key + "'");
    }

private:
    std::size_t column(const std::string& name) const
    {
        for (std::size_t c = 0; c < columns_.size(); ++c)
            if (columns_[c] == name)
                return c;
        throw ConfigError("golden file '" + path_ + "': no column '" + name + "'");
    }

    std::string path_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

enum class CheckStatus
{
    Pass,
    Fail,
    Warn, // failed, but only at a quadrature size below the documented one
};

inline const char* status_name(CheckStatus s)
{
    switch (s)
    {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    default: return "WARN";
    }
}

struct CriterionResult
{
    int id = 0;
    std::string title;
    CheckStatus status = CheckStatus::Pass;
    std::vector<std::string> details;
    double seconds = 0;
    double budget = 0;
};

struct ValidationOptions
{
    std::filesystem::path golden_dir = SLFD_GOLDEN_DIR;
    std::optional<int> K; // replaces the documented quadrature sizes
};

namespace detail
{

// Collects sub-checks of one criterion.
class Checker
{
public:
    void near(const std::string& what, double measured, double expected, double tol)
    {
        const double err = std::abs(measured - expected);
        record(err <= tol, what + ": measured " + format_real(measured) + ", expected " + format_real(expected)
                               + ", |diff| " + sci(err) + " (tol " + sci(tol, 1) + ")");
    }

    void at_most(const std::string& what, double measured, double bound)
    {
        record(measured <= bound, what + ": " + sci(measured, 3) + " <= " + sci(bound, 3));
    }

    void holds(const std::string& what, bool ok) { record(ok, what); }

    void fail(const std::string& what) { record(false, what); }

    bool ok() const { return ok_; }
    std::vector<std::string>& lines() { return lines_; }

private:
    void record(bool ok, const std::string& text)
    {
        ok_ = ok_ && ok;
        lines_.push_back(std::string(ok ? "ok   " : "FAIL ") + text);
    }

    bool ok_ = true;
    std::vector<std::string> lines_;
};

struct Problem1d
{
    Potential<double> q;
    PiecewiseConstantCoeff<double> qbar;
    SincGrid<double> grid;
};

inline Problem1d make_problem(const std::string& q_text, const std::vector<std::string>& bps, int N, int K)
{
    std::vector<double> b;
    for (const auto& t : bps)
        b.push_back(evaluate_constant<double>(t));
    Problem1d p{Potential<double>::from_text(q_text, b), {}, {}};
    const auto mesh = build_mesh<double>(N, b);
    p.qbar = approximate_coefficient(p.q, mesh);
    p.grid = build_grid(mesh, K);
    return p;
}

inline FdSolution<double> fd(const Problem1d& p, int n, int rank)
{
    FdOptions<double> opt;
    opt.rank = rank;
    return solve_fd(n, p.q, p.qbar, p.grid, opt);
}

inline const char* example2_q() { return "ln(abs((5/12 - x)*(1/3 + x)))"; }
inline const char* example3_q() { return "1/sqrt(abs(x+1/3)) + ln(abs(x-1/3))"; }

// Legendre polynomial P_n(x) by the three-term recurrence.
inline double legendre_poly(int n, double x)
{
    double p0 = 1, p1 = x;
    if (n == 0)
        return p0;
    for (int k = 2; k <= n; ++k)
    {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

} // namespace detail

class AcceptanceSuite
{
public:
    explicit AcceptanceSuite(ValidationOptions opt = {}) : opt_(std::move(opt)) {}

    static constexpr int count = 10;

    CriterionResult run(int id) const
    {
        static const std::map<int, std::pair<std::string, double>> meta = {
            {1, {"basic spectrum sanity", 5}},
            {2, {"closed-form corrections for q = x", 60}},
            {3, {"q = x, N = 1, rank 10", 60}},
            {4, {"q = x, N = 3 eigenvalues and residuals", 300}},
            {5, {"superexponential decay and majorant", 60}},
            {6, {"bound coefficients", 1}},
            {7, {"transfer Wronskian", 30}},
            {8, {"Galerkin oracle cross-check", 120}},
            {9, {"singular potentials", 600}},
            {10, {"tanh rule convergence", 1}},
        };
        CriterionResult r;
        r.id = id;
        r.title = meta.at(id).first;
        r.budget = meta.at(id).second;
        detail::Checker c;
        bool quadrature_limited = false;
        const auto t0 = std::chrono::steady_clock::now();
        try
        {
            switch (id)
            {
            case 1: basic_spectrum_sanity(c); break;
            case 2: quadrature_limited = true; closed_form(c); break;
            case 3: quadrature_limited = true; rank10(c); break;
            case 4: quadrature_limited = true; three_intervals(c); break;
            case 5: quadrature_limited = true; superexponential(c); break;
            case 6: bound_coefficients(c); break;
            case 7: wronskian(c); break;
            case 8: quadrature_limited = true; oracle(c); break;
            case 9: quadrature_limited = true; singular(c); break;
            case 10: tanh_rule(c); break;
            default: throw InvalidParameter("unknown criterion");
            }
        }
        catch (const std::exception& e)
        {
            c.fail(std::string("exception: ") + e.what());
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (r.seconds > r.budget)
            c.fail("runtime " + detail::sci(r.seconds, 2) + " s exceeds " + detail::sci(r.budget, 1) + " s");
        r.details = std::move(c.lines());
        if (c.ok())
            r.status = CheckStatus::Pass;
        else if (quadrature_limited && opt_.K && *opt_.K < 350)
        {
            r.status = CheckStatus::Warn;
            r.details.push_back("degraded precision: K = " + std::to_string(*opt_.K) + " is below the documented 350/500");
        }
        else
            r.status = CheckStatus::Fail;
        return r;
    }

    std::vector<CriterionResult> run_all(std::ostream* progress = nullptr) const
    {
        std::vector<CriterionResult> out;
        for (int id = 1; id <= count; ++id)
        {
            out.push_back(run(id));
            if (progress)
                print(*progress, out.back());
        }
        return out;
    }

    static void print(std::ostream& os, const CriterionResult& r, bool verbose = true)
    {
        char head[160];
        std::snprintf(head, sizeof head, "[%s] criterion %2d: %s (%.2f s)", status_name(r.status), r.id, r.title.c_str(),
                      r.seconds);
        os << head << "\n";
        if (verbose)
            for (const auto& d : r.details)
                os << "       " << d << "\n";
        os.flush();
    }

private:
    int k_small() const { return opt_.K.value_or(350); }
    int k_single() const { return opt_.K.value_or(500); }
    GoldenTable golden(const std::string& name) const { return GoldenTable::load(opt_.golden_dir / name); }

    void basic_spectrum_sanity(detail::Checker& c) const
    {
        const auto mesh = build_mesh<double>(1);
        const auto qbar = constant_coefficient(mesh, 0.0);
        const auto grid = build_grid(mesh, 64);
        double worst_lambda = 0, worst_shape = 0;
        for (int n = 0; n <= 10; ++n)
        {
            const auto e = solve_basic(n, qbar, grid);
            worst_lambda = std::max(worst_lambda, std::abs(e.lambda0 - n * (n + 1.0)));
            double up = 0, pp = 0, umax = 0;
            std::vector<double> u(20), p(20);
            for (int k = 0; k < 20; ++k)
            {
                const double x = -0.95 + 0.1 * k;
                u[k] = e.eigenfunction.eval(x);
                p[k] = detail::legendre_poly(n, x);
                up += u[k] * p[k];
                pp += p[k] * p[k];
                umax = std::max(umax, std::abs(u[k]));
            }
            const double scale = up / pp;
            for (int k = 0; k < 20; ++k)
                worst_shape = std::max(worst_shape, std::abs(u[k] - scale * p[k]) / umax);
        }
        c.at_most("max_n |lambda_n - n(n+1)|, n = 0..10", worst_lambda, 1e-10);
        c.at_most("max relative deviation of u_n from a multiple of P_n at 20 points", worst_shape, 1e-9);
    }

    void closed_form(detail::Checker& c) const
    {
        const auto g = golden("example1_closed_form.csv");
        const auto p = detail::make_problem("x", {}, 1, k_single());
        const auto s = detail::fd(p, 0, 6);
        const double tol[] = {0, 1e-9, 1e-8, 1e-9, 1e-8, 1e-9, 1e-7};
        for (int d = 1; d <= 6; ++d)
            c.near("lambda_0^(" + std::to_string(d) + ")", s.lambda_corrections[d], g.lookup("lambda_" + std::to_string(d)),
                   tol[d]);
        const double slope = g.lookup("u1_slope");
        const double norm = std::sqrt(s.norm_sq);
        const auto& grid = p.grid;
        double worst = 0;
        for (int j = -grid.half_count(); j <= grid.half_count(); ++j)
            worst = std::max(worst, std::abs(s.corrections[1].at(0, j) / norm - slope * grid.node(0, j)));
        c.at_most("max over nodes |u_0^(1) - c x| (u0 normalized)", worst, 1e-7);
    }

    void rank10(detail::Checker& c) const
    {
        const auto g = golden("example1_fd_n1.csv");
        const auto ref = golden("example1_sleign2.csv");
        const auto p = detail::make_problem("x", {}, 1, k_single());
        const auto s = detail::fd(p, 0, 10);
        const std::size_t row = g.find("m", 10);
        const double lambda = s.eigenvalue_sum();
        c.near("lambda~_0 at m = 10", lambda, g.value(row, "lambda"), 1e-8);
        c.near("|lambda~_0 - lambda_sleign2|", std::abs(lambda - ref.value(ref.find("n", 0), "lambda")),
               g.value(row, "diff_ref"), 1e-7);
    }

    void three_intervals(detail::Checker& c) const
    {
        const auto g = golden("example1_fd_n3.csv");
        const auto p = detail::make_problem("x", {}, 3, k_small());
        for (std::size_t r = 0; r < g.rows(); ++r)
        {
            const int n = static_cast<int>(g.value(r, "n"));
            const int m = static_cast<int>(g.value(r, "m"));
            const auto s = detail::fd(p, n, m);
            const std::string tag = "n = " + std::to_string(n) + ", m = " + std::to_string(m);
            c.near("lambda~ " + tag, s.eigenvalue_sum(), g.value(r, "lambda"), n == 0 ? 1e-9 : 1e-8);
            c.at_most("eta " + tag, s.diagnostics.back().eta, 1e-9);
        }
    }

    void superexponential(detail::Checker& c) const
    {
        const auto p = detail::make_problem("x", {}, 3, k_small());
        const auto s = detail::fd(p, 0, 15);
        bool decreasing = true;
        for (int j = 3; j <= 15; ++j)
            if (!(std::log(s.correction_norms[j]) < std::log(s.correction_norms[j - 1])))
                decreasing = false;
        c.holds("ln||u^(j)|| strictly decreasing for j >= 2", decreasing);

        const auto dev = sup_deviation(p.q, p.qbar);
        const auto spectrum = basic_spectrum(p.qbar, 1);
        const auto b = apriori_bounds(reciprocal_gap(spectrum, 0), dev.value);
        c.holds("r = 4 M_0 ||q - qbar|| = " + detail::sci(b.r, 4) + " <= 1", b.r <= 1);
        if (b.r <= 1)
        {
            double worst = 0;
            for (int j = 1; j <= 15; ++j)
                worst = std::max(worst, s.relative_norm(j) / (std::pow(b.r, j) * alpha<double>(j)));
            c.at_most("max_j ||u^(j)|| / (r^j alpha_j)", worst, 1.0);
        }
    }

    void bound_coefficients(detail::Checker& c) const
    {
        bool catalan_ok = true;
        for (int j = 0; j <= 15; ++j)
            if (alpha<double>(j) * std::ldexp(1.0, 2 * j) != static_cast<double>(catalan(j)))
                catalan_ok = false;
        c.holds("alpha_j 4^j equals the Catalan number C_j exactly, j = 0..15", catalan_ok);

        double worst = 0;
        for (int m = 1; m <= 30; ++m)
            worst = std::max(worst, alpha<double>(m + 1) * (m + 1) * std::sqrt(std::numbers::pi * m));
        c.at_most("max_m alpha_{m+1} (m+1) sqrt(pi m), m = 1..30", worst, 1.0);

        const auto mesh = build_mesh<double>(1);
        const auto spectrum = basic_spectrum(constant_coefficient(mesh, 0.0), 11);
        const double q_sup = 1.0; // max |x| on [-1, 1]
        double diff = 0;
        for (int n = 1; n <= 10; ++n)
        {
            const auto b = apriori_bounds(reciprocal_gap(spectrum, n), q_sup);
            diff = std::max(diff, std::abs(b.r - zero_coefficient_ratio(n, q_sup)));
        }
        c.at_most("max_n |r_n - 2||q||/n| with qbar = 0, q = x, n = 1..10", diff, 1e-12);
    }

    void wronskian(detail::Checker& c) const
    {
        const auto p = detail::make_problem(detail::example2_q(), {"-1/3", "5/12"}, 24, 8);
        std::mt19937_64 rng(20240601);
        std::uniform_real_distribution<double> dist(-5.0, 500.0);
        double worst = 0;
        for (int t = 0; t < 100; ++t)
        {
            const double lambda = dist(rng);
            const auto tr = transfer_coefficients(lambda, p.qbar, Complex<double>(1), Complex<double>(0));
            for (int i = 1; i < p.qbar.mesh.intervals(); ++i)
            {
                const double x = p.qbar.mesh.left(i);
                const double expect = 1.0 / ((1 - x) * (1 + x));
                worst = std::max(worst, std::abs(tr.wronskian[i - 1] - expect) / expect);
            }
        }
        c.at_most("max relative |delta - 1/(1-x^2)| over 100 lambda in [-5, 500]", worst, 1e-9);
    }

    void oracle(detail::Checker& c) const
    {
        const auto fdref = golden("example1_fd_n3.csv");
        const auto sl2 = golden("example1_sleign2.csv");
        const auto g = galerkin_oracle(Potential<double>::from_text("x"), 200);
        const auto p = detail::make_problem("x", {}, 3, k_small());
        for (int n = 0; n <= 4; ++n)
        {
            const double lam = detail::fd(p, n, 15).eigenvalue_sum();
            const double ref = sl2.value(sl2.find("n", n), "lambda");
            const double disc = fdref.value(fdref.find("n", n), "diff_ref");
            const std::string tag = "n = " + std::to_string(n);
            c.near("oracle vs FD " + tag, g.eigenvalues[n], lam, 1e-8);
            c.at_most("|FD - sleign2| " + tag, std::abs(lam - ref), disc);
            c.at_most("|oracle - sleign2| " + tag, std::abs(g.eigenvalues[n] - ref), disc);
        }
    }

    void singular(detail::Checker& c) const
    {
        const auto g2 = golden("example2_fd_n24.csv");
        const auto p2 = detail::make_problem(detail::example2_q(), {"-1/3", "5/12"}, 24, k_small());
        for (std::size_t r = 0; r < g2.rows(); ++r)
        {
            const int n = static_cast<int>(g2.value(r, "n")), m = static_cast<int>(g2.value(r, "m"));
            const auto s = detail::fd(p2, n, m);
            c.near("ln potential, N = 24, n = " + std::to_string(n) + ", m = " + std::to_string(m), s.eigenvalue_sum(),
                   g2.value(r, "lambda"), 1e-6);
        }
        const auto g3 = golden("example3_fd_n12.csv");
        const auto p3 = detail::make_problem(detail::example3_q(), {"-1/3", "1/3"}, 12, k_small());
        for (std::size_t r = 0; r < g3.rows(); ++r)
        {
            const int n = static_cast<int>(g3.value(r, "n")), m = static_cast<int>(g3.value(r, "m"));
            const auto s = detail::fd(p3, n, m);
            const std::string tag = "sqrt + ln potential, N = 12, n = " + std::to_string(n) + ", m = " + std::to_string(m);
            c.near(tag, s.eigenvalue_sum(), g3.value(r, "lambda"), 1e-6);
            c.at_most("eta " + tag, s.diagnostics.back().eta, 1e-8);
        }
    }

    void tanh_rule(detail::Checker& c) const
    {
        const auto mesh = build_mesh<double>(1);
        auto error = [&](int K) {
            const auto grid = build_grid(mesh, K);
            auto f = grid.make_function();
            for (int j = -K; j <= K; ++j)
                f.at(0, j) = 1.0 / std::sqrt(grid.abscissa(0, j).weight());
            return std::abs(integrate(grid, f) - std::numbers::pi);
        };
        const double e50 = error(50), e200 = error(200);
        c.at_most("error at K = 200 vs 1e-3 x error at K = 50 (" + detail::sci(e50, 2) + ")", e200, e50 / 1e3);
    }

    ValidationOptions opt_;
};

} // namespace slfd
