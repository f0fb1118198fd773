#pragma once

// Running a ProblemConfig end to end and writing its outputs.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "slfd/basicsolver.hpp"
#include "slfd/coeffmesh.hpp"
#include "slfd/config.hpp"
#include "slfd/fdengine.hpp"
#include "slfd/sincquad.hpp"

namespace slfd
{

struct IndexResult
{
    int n = 0;
    int rank = 0;
    double lambda = 0;
    double gap_m = 0;
    double quadrature_floor = 0;
    std::vector<RankDiagnostics<double>> diagnostics;
    std::vector<FdWarning> warnings;
    std::optional<double> reference;
};

struct RunResult
{
    ProblemConfig config;
    Mesh<double> mesh;
    std::vector<IndexResult> rows; // in config index order
};

// Shared immutable state for one config: potential, mesh, qbar and grid.
struct PreparedProblem
{
    Potential<double> q;
    Mesh<double> mesh;
    PiecewiseConstantCoeff<double> qbar;
    SincGrid<double> grid;

    static PreparedProblem from_config(const ProblemConfig& c)
    {
        PreparedProblem p;
        p.q = c.potential();
        p.mesh = build_mesh<double>(c.N, p.q.breakpoints);
        p.qbar = approximate_coefficient(p.q, p.mesh, c.rule);
        p.grid = build_grid(p.mesh, c.K, c.h_sinc);
        return p;
    }
};

inline IndexResult solve_index(const PreparedProblem& p, const ProblemConfig& c, std::size_t k)
{
    FdOptions<double> opt;
    opt.rank = c.rank_for(k);
    opt.tol = c.tol;
    const int n = c.indices[k];
    auto basic = solve_basic(n, p.qbar, p.grid, c.bisect_tol);
    const auto prob = prepare_problem(p.q, p.qbar, p.grid, std::move(basic));
    const auto sol = run_fd(prob, opt);
    IndexResult r;
    r.n = n;
    r.rank = sol.rank;
    r.lambda = sol.eigenvalue_sum();
    r.gap_m = prob.basic.gap_m;
    r.quadrature_floor = sol.quadrature_floor;
    r.diagnostics = sol.diagnostics;
    r.warnings = sol.warnings;
    if (!c.reference.empty())
        r.reference = c.reference[k];
    return r;
}

// Indices run concurrently on up to `parallel` threads; rows keep config order.
inline RunResult run_config(const ProblemConfig& c, int parallel = 1)
{
    c.validate();
    const PreparedProblem p = PreparedProblem::from_config(c);
    RunResult res{c, p.mesh, std::vector<IndexResult>(c.indices.size())};
    const std::size_t count = c.indices.size();
    if (parallel <= 1)
    {
        for (std::size_t k = 0; k < count; ++k)
            res.rows[k] = solve_index(p, c, k);
        return res;
    }
    for (std::size_t start = 0; start < count; start += static_cast<std::size_t>(parallel))
    {
        std::vector<std::future<IndexResult>> jobs;
        const std::size_t stop = std::min(count, start + static_cast<std::size_t>(parallel));
        for (std::size_t k = start; k < stop; ++k)
            jobs.push_back(std::async(std::launch::async, [&p, &c, k] { return solve_index(p, c, k); }));
        for (std::size_t k = start; k < stop; ++k)
            res.rows[k] = jobs[k - start].get();
    }
    return res;
}

namespace detail
{

inline std::string sci(double v, int digits = 2)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*e", digits, v);
    return buf;
}

inline std::string fixed17(double v)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.15f", v);
    return buf;
}

} // namespace detail

inline void write_summary(std::ostream& out, const RunResult& r)
{
    const bool refs = std::any_of(r.rows.begin(), r.rows.end(), [](const IndexResult& x) { return x.reference.has_value(); });
    char line[256];
    std::snprintf(line, sizeof line, "%3s %4s %24s %11s %11s %11s %11s", "n", "m", "lambda", "|lambda^m|", "||u^m||",
                  "eta", "eta_bar");
    out << line << (refs ? "   |lambda-ref|" : "") << "\n";
    for (const auto& row : r.rows)
    {
        const auto& d = row.diagnostics.back();
        std::snprintf(line, sizeof line, "%3d %4d %24s %11s %11s %11s %11s", row.n, d.rank, detail::fixed17(d.lambda_sum).c_str(),
                      detail::sci(std::abs(d.lambda_correction)).c_str(), detail::sci(d.correction_norm).c_str(),
                      detail::sci(d.eta).c_str(), detail::sci(d.eta_bar).c_str());
        out << line;
        if (row.reference)
            out << "   " << detail::sci(std::abs(d.lambda_sum - *row.reference), 4);
        out << "\n";
    }
}

inline const char* convergence_csv_header() { return "n,rank,lambda_corr,lambda_sum,corr_norm,eta,eta_bar"; }

inline void write_convergence_csv(std::ostream& out, const RunResult& r)
{
    out << convergence_csv_header() << "\n";
    char line[256];
    for (const auto& row : r.rows)
        for (const auto& d : row.diagnostics)
        {
            std::snprintf(line, sizeof line, "%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", row.n, d.rank, d.lambda_correction,
                          d.lambda_sum, d.correction_norm, d.eta, d.eta_bar);
            out << line;
        }
}

inline void write_outputs(const RunResult& r, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    {
        std::ofstream f(dir / "summary.txt");
        write_summary(f, r);
    }
    {
        std::ofstream f(dir / "convergence.csv");
        write_convergence_csv(f, r);
    }
    {
        std::ofstream f(dir / "effective_config.txt");
        f << write_config(r.config);
    }
}

struct BoundsRow
{
    int n = 0;
    double gap_m = 0;
    ConvergenceBound<double> bound;
    std::optional<int> predicted_rank;
    std::optional<double> asymptotic_m; // (2n - 2||q||)^-1 when n > 2||q||
    std::optional<double> zero_coeff_q;   // q_n when qbar is identically zero
};

struct BoundsReport
{
    double deviation = 0;
    bool deviation_reliable = true;
    double q_sup = 0;
    bool qbar_zero = false;
    double target = 1e-12;
    int intervals = 0;
    std::vector<BoundsRow> rows;
};

inline BoundsReport compute_bounds(const ProblemConfig& c)
{
    c.validate();
    const PreparedProblem p = PreparedProblem::from_config(c);
    BoundsReport rep;
    const auto dev = sup_deviation(p.q, p.qbar);
    rep.deviation = dev.value;
    rep.deviation_reliable = dev.reliable;
    rep.intervals = p.mesh.intervals();
    rep.q_sup = sup_deviation(p.q, constant_coefficient(p.mesh, 0.0)).value;
    rep.qbar_zero = std::all_of(p.qbar.values.begin(), p.qbar.values.end(), [](double v) { return v == 0.0; });
    if (c.tol)
        rep.target = *c.tol;
    const int n_max = *std::max_element(c.indices.begin(), c.indices.end());
    const auto spectrum = basic_spectrum(p.qbar, n_max + 1, c.bisect_tol);
    for (int n : c.indices)
    {
        BoundsRow row;
        row.n = n;
        row.gap_m = reciprocal_gap(spectrum, n);
        row.bound = apriori_bounds(row.gap_m, rep.deviation);
        row.predicted_rank = row.bound.rank_for(rep.target);
        row.asymptotic_m = asymptotic_gap_bound(n, rep.q_sup);
        if (rep.qbar_zero)
            row.zero_coeff_q = zero_coefficient_ratio(n, rep.q_sup);
        rep.rows.push_back(row);
    }
    return rep;
}

inline void write_bounds(std::ostream& out, const BoundsReport& rep)
{
    char line[256];
    std::snprintf(line, sizeof line, "||q - qbar||_inf ~ %.6e%s   ||q||_inf ~ %.6e   target %.1e\n", rep.deviation,
                  rep.deviation_reliable ? "" : " (unreliable: q is unbounded or non-finite near a mesh point)",
                  rep.q_sup, rep.target);
    out << line;
    std::snprintf(line, sizeof line, "%3s %12s %12s %12s %8s %14s %12s\n", "n", "M_n", "r_bar", "r", "rank", "M_n asympt.",
                  "q_n");
    out << line;
    for (const auto& row : rep.rows)
    {
        const std::string rank = row.predicted_rank ? std::to_string(*row.predicted_rank) : "-";
        const std::string asym = row.asymptotic_m ? detail::sci(*row.asymptotic_m, 4) : "-";
        const std::string qn = row.zero_coeff_q ? detail::sci(*row.zero_coeff_q, 4) : "-";
        std::snprintf(line, sizeof line, "%3d %12s %12s %12s %8s %14s %12s\n", row.n, detail::sci(row.gap_m, 4).c_str(),
                      detail::sci(row.bound.r_bar, 4).c_str(), detail::sci(row.bound.r, 4).c_str(), rank.c_str(),
                      asym.c_str(), qn.c_str());
        out << line;
    }
    for (const auto& row : rep.rows)
    {
        if (row.bound.status == BoundStatus::NotApplicable)
            out << "n = " << row.n << ": r = " << detail::sci(row.bound.r, 3) << " >= 1, a-priori bound not applicable\n";
        if (row.zero_coeff_q && !(*row.zero_coeff_q < 1.0))
            out << "zero-coefficient bound not applicable for n=" << row.n << " at N=" << rep.intervals
                << " (q_n = " << detail::sci(*row.zero_coeff_q, 3) << ")\n";
    }
}

} // namespace slfd
