#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "slfd/config.hpp"
#include "slfd/errors.hpp"
#include "slfd/oracle.hpp"
#include "slfd/report.hpp"
#include "slfd/validation.hpp"

namespace
{

enum ExitCode
{
    exit_ok = 0,
    exit_usage = 1,
    exit_numerical = 2,
    exit_validation = 3,
};

std::vector<int> parse_index_list(const std::string& s)
{
    return slfd::detail::parse_indices("--n", s);
}

int cmd_solve(const std::string& path, const std::string& n_list, const std::vector<int>& ranks, int K, int N,
              const std::string& out, int parallel)
{
    auto cfg = slfd::load_config(path);
    if (!n_list.empty())
    {
        cfg.indices = parse_index_list(n_list);
        if (!cfg.reference.empty() && cfg.reference.size() != cfg.indices.size())
            cfg.reference.clear();
        if (cfg.ranks.size() > 1 && ranks.empty())
            cfg.ranks = {*std::max_element(cfg.ranks.begin(), cfg.ranks.end())};
    }
    if (!ranks.empty())
        cfg.ranks = ranks;
    if (K > 0)
        cfg.K = K;
    if (N > 0)
        cfg.N = N;
    if (!out.empty())
        cfg.out_dir = out;
    cfg.validate();

    const auto res = slfd::run_config(cfg, parallel);
    for (const auto& row : res.rows)
        for (const auto& w : row.warnings)
            std::cerr << w.kind << ": " << w.message << "\n";
    slfd::write_summary(std::cout, res);
    slfd::write_outputs(res, cfg.out_dir);
    double floor = 0;
    for (const auto& row : res.rows)
        floor = std::max(floor, row.quadrature_floor);
    std::cout << "quadrature noise floor ~ " << slfd::detail::sci(floor, 1) << " (K = " << cfg.K << ")\n";
    std::cout << "wrote " << cfg.out_dir << "/summary.txt, convergence.csv, effective_config.txt\n";
    return exit_ok;
}

int cmd_bounds(const std::string& path)
{
    const auto cfg = slfd::load_config(path);
    const auto rep = slfd::compute_bounds(cfg);
    if (!rep.deviation_reliable)
        std::cerr << "warning: the estimate of ||q - qbar|| is unreliable; bounds are indicative only\n";
    slfd::write_bounds(std::cout, rep);
    return exit_ok;
}

int cmd_oracle(const std::string& path, int modes)
{
    const auto cfg = slfd::load_config(path);
    const auto res = slfd::galerkin_oracle(cfg.potential(), modes);
    std::cout << "Galerkin oracle, " << modes << " modes (orthonormality defect "
              << slfd::detail::sci(res.orthonormality_defect, 1) << ")\n";
    for (int n : cfg.indices)
    {
        if (n >= modes)
            throw slfd::InvalidParameter("index " + std::to_string(n) + " needs more modes");
        char line[96];
        std::snprintf(line, sizeof line, "%3d %24.17g\n", n, res.eigenvalues[n]);
        std::cout << line;
    }
    return exit_ok;
}

int cmd_validate(const std::string& golden_dir, int K, bool quiet)
{
    slfd::ValidationOptions opt;
    if (!golden_dir.empty())
        opt.golden_dir = golden_dir;
    if (K > 0)
        opt.K = K;
    const slfd::AcceptanceSuite suite(opt);
    int failed = 0, warned = 0;
    for (int id = 1; id <= slfd::AcceptanceSuite::count; ++id)
    {
        const auto r = suite.run(id);
        slfd::AcceptanceSuite::print(std::cout, r, !quiet || r.status != slfd::CheckStatus::Pass);
        failed += r.status == slfd::CheckStatus::Fail;
        warned += r.status == slfd::CheckStatus::Warn;
    }
    std::cout << (failed ? "validation FAILED: " : "validation passed: ") << failed << " failed, " << warned
              << " degraded\n";
    return failed ? exit_validation : exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"slfd: eigenvalues of the Legendre-operator Sturm-Liouville problem by the FD method"};
    app.require_subcommand(1);

    std::string config, n_list, out, golden_dir;
    std::vector<int> ranks;
    int K = 0, N = 0, parallel = 1, modes = 200, vK = 0;
    bool quiet = false;

    auto* solve = app.add_subcommand("solve", "run the FD method for the indices in a config");
    solve->add_option("--config", config, "problem file")->required()->check(CLI::ExistingFile);
    solve->add_option("--n", n_list, "indices, e.g. 0,2,4..6");
    solve->add_option("--rank", ranks, "rank m, or one rank per index")->delimiter(',');
    solve->add_option("--K", K, "sinc half count")->check(CLI::PositiveNumber);
    solve->add_option("--N", N, "mesh intervals")->check(CLI::PositiveNumber);
    solve->add_option("--out", out, "output directory");
    solve->add_option("--parallel", parallel, "concurrent indices")->check(CLI::PositiveNumber);

    auto* bounds = app.add_subcommand("bounds", "a-priori convergence bounds");
    bounds->add_option("--config", config, "problem file")->required()->check(CLI::ExistingFile);

    auto* oracle = app.add_subcommand("oracle", "Galerkin reference eigenvalues");
    oracle->add_option("--config", config, "problem file")->required()->check(CLI::ExistingFile);
    oracle->add_option("--modes", modes, "Legendre modes (>= 16)");

    auto* validate = app.add_subcommand("validate", "run the acceptance checks");
    validate->add_option("--golden-dir", golden_dir, "directory with golden CSV files");
    validate->add_option("--K", vK, "override the quadrature size")->check(CLI::PositiveNumber);
    validate->add_flag("--quiet", quiet, "print details only for failing checks");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        return app.exit(e) == 0 ? exit_ok : exit_usage;
    }

    try
    {
        if (*solve)
            return cmd_solve(config, n_list, ranks, K, N, out, parallel);
        if (*bounds)
            return cmd_bounds(config);
        if (*oracle)
            return cmd_oracle(config, modes);
        if (*validate)
            return cmd_validate(golden_dir, vK, quiet);
    }
    catch (const slfd::UsageError& e)
    {
        std::cerr << e.name() << ": " << e.what() << "\n";
        return exit_usage;
    }
    catch (const slfd::NumericalError& e)
    {
        std::cerr << e.name() << ": " << e.what() << "\n";
        return exit_numerical;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    }
    return exit_usage;
}
