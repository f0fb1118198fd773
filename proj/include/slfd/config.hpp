#pragma once

// Problem files: "[section]" headers, "key = value" lines, '#' comments.
//
//   [problem]    q = <expression>, breakpoints = <expr>, <expr>, ...
//   [mesh]       N = <int>, rule = midpoint | endpoint_average
//   [quadrature] K = <int>, h_sinc = <real>
//   [solve]      indices = 0, 1, 3..5   rank = <int> or one rank per index
//                tol = <real>, bisect_tol = <real>, reference = <real>, ...
//   [output]     dir = <path>

#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "slfd/coeffmesh.hpp"
#include "slfd/errors.hpp"
#include "slfd/exprparse.hpp"

namespace slfd
{

struct ProblemConfig
{
    std::string q_text = "0";
    std::vector<std::string> breakpoint_text;
    int N = 1;
    CoeffRule rule = CoeffRule::Midpoint;
    int K = 350;
    std::optional<double> h_sinc;
    std::vector<int> indices{0};
    std::vector<int> ranks{10}; // one entry, or one per index
    std::optional<double> tol;
    double bisect_tol = 1e-13;
    std::vector<double> reference;
    std::string out_dir = "slfd_out";

    int rank_for(std::size_t k) const { return ranks.size() == 1 ? ranks.front() : ranks.at(k); }

    std::vector<double> breakpoints() const
    {
        std::vector<double> b;
        for (const auto& t : breakpoint_text)
            b.push_back(evaluate_constant<double>(t));
        return b;
    }

    Potential<double> potential() const { return Potential<double>::from_text(q_text, breakpoints()); }

    void validate() const
    {
        if (N < 1)
            throw ConfigError("N must be at least 1");
        if (K < 8)
            throw ConfigError("K must be at least 8");
        if (indices.empty())
            throw ConfigError("indices must not be empty");
        for (int n : indices)
            if (n < 0)
                throw ConfigError("indices must be non-negative");
        if (ranks.empty() || (ranks.size() != 1 && ranks.size() != indices.size()))
            throw ConfigError("rank must be a single value or one value per index");
        for (int m : ranks)
            if (m < 0)
                throw ConfigError("rank must be non-negative");
        if (!reference.empty() && reference.size() != indices.size())
            throw ConfigError("reference must list one value per index");
        if (h_sinc && !(*h_sinc > 0))
            throw ConfigError("h_sinc must be positive");
        if (tol && !(*tol > 0))
            throw ConfigError("tol must be positive");
        if (!(bisect_tol >= 1e-14))
            throw ConfigError("bisect_tol must be at least 1e-14");
        for (double b : breakpoints())
            if (!(b > -1 && b < 1))
                throw ConfigError("breakpoint " + std::to_string(b) + " is not inside (-1, 1)");
        parse(q_text);
    }
};

namespace detail
{

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ','))
    {
        item = trim(item);
        if (!item.empty())
            out.push_back(item);
    }
    return out;
}

inline int parse_int(const std::string& key, const std::string& v)
{
    std::size_t used = 0;
    int r = 0;
    try
    {
        r = std::stoi(v, &used);
    }
    catch (const std::exception&)
    {
        throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
    }
    if (used != v.size())
        throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
    return r;
}

inline double parse_real(const std::string& key, const std::string& v)
{
    try
    {
        return evaluate_constant<double>(v);
    }
    catch (const Error&)
    {
        throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
    }
}

inline std::vector<int> parse_indices(const std::string& key, const std::string& v)
{
    std::vector<int> out;
    for (const auto& item : split_list(v))
    {
        const auto dots = item.find("..");
        if (dots == std::string::npos)
        {
            out.push_back(parse_int(key, item));
            continue;
        }
        const int a = parse_int(key, trim(item.substr(0, dots)));
        const int b = parse_int(key, trim(item.substr(dots + 2)));
        if (b < a)
            throw ConfigError("key '" + key + "': empty range '" + item + "'");
        for (int k = a; k <= b; ++k)
            out.push_back(k);
    }
    return out;
}

inline std::string format_real(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

inline ProblemConfig parse_config(std::istream& in, const std::string& origin = "<config>")
{
    ProblemConfig c;
    std::string section;
    std::string line;
    int lineno = 0;
    std::map<std::string, int> seen;
    while (std::getline(in, line))
    {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        const std::string where = origin + ":" + std::to_string(lineno) + ": ";
        if (line.front() == '[')
        {
            if (line.back() != ']')
                throw ConfigError(where + "unterminated section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section != "problem" && section != "mesh" && section != "quadrature" && section != "solve"
                && section != "output")
                throw ConfigError(where + "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + "expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        const std::string full = section + "." + key;
        if (seen[full]++)
            throw ConfigError(where + "duplicate key '" + full + "'");
        try
        {
            if (full == "problem.q")
                c.q_text = value;
            else if (full == "problem.breakpoints")
                c.breakpoint_text = detail::split_list(value);
            else if (full == "mesh.N")
                c.N = detail::parse_int(key, value);
            else if (full == "mesh.rule")
            {
                if (value == "midpoint")
                    c.rule = CoeffRule::Midpoint;
                else if (value == "endpoint_average")
                    c.rule = CoeffRule::EndpointAverage;
                else
                    throw ConfigError("rule must be midpoint or endpoint_average");
            }
            else if (full == "quadrature.K")
                c.K = detail::parse_int(key, value);
            else if (full == "quadrature.h_sinc")
                c.h_sinc = detail::parse_real(key, value);
            else if (full == "solve.indices")
                c.indices = detail::parse_indices(key, value);
            else if (full == "solve.rank")
            {
                c.ranks.clear();
                for (const auto& r : detail::split_list(value))
                    c.ranks.push_back(detail::parse_int(key, r));
            }
            else if (full == "solve.tol")
                c.tol = detail::parse_real(key, value);
            else if (full == "solve.bisect_tol")
                c.bisect_tol = detail::parse_real(key, value);
            else if (full == "solve.reference")
            {
                c.reference.clear();
                for (const auto& r : detail::split_list(value))
                    c.reference.push_back(detail::parse_real(key, r));
            }
            else if (full == "output.dir")
                c.out_dir = value;
            else
                throw ConfigError("unknown key '" + full + "'");
        }
        catch (const ConfigError& e)
        {
            throw ConfigError(where + e.what());
        }
    }
    c.validate();
    return c;
}

inline ProblemConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, path);
}

inline std::string write_config(const ProblemConfig& c)
{
    std::ostringstream o;
    auto join_ints = [](const std::vector<int>& v) {
        std::string s;
        for (std::size_t k = 0; k < v.size(); ++k)
            s += (k ? ", " : "") + std::to_string(v[k]);
        return s;
    };
    o << "[problem]\n";
    o << "q = " << c.q_text << "\n";
    if (!c.breakpoint_text.empty())
    {
        o << "breakpoints = ";
        for (std::size_t k = 0; k < c.breakpoint_text.size(); ++k)
            o << (k ? ", " : "") << c.breakpoint_text[k];
        o << "\n";
    }
    o << "\n[mesh]\n";
    o << "N = " << c.N << "\n";
    o << "rule = " << (c.rule == CoeffRule::Midpoint ? "midpoint" : "endpoint_average") << "\n";
    o << "\n[quadrature]\n";
    o << "K = " << c.K << "\n";
    if (c.h_sinc)
        o << "h_sinc = " << detail::format_real(*c.h_sinc) << "\n";
    o << "\n[solve]\n";
    o << "indices = " << join_ints(c.indices) << "\n";
    o << "rank = " << join_ints(c.ranks) << "\n";
    if (c.tol)
        o << "tol = " << detail::format_real(*c.tol) << "\n";
    o << "bisect_tol = " << detail::format_real(c.bisect_tol) << "\n";
    if (!c.reference.empty())
    {
        o << "reference = ";
        for (std::size_t k = 0; k < c.reference.size(); ++k)
            o << (k ? ", " : "") << detail::format_real(c.reference[k]);
        o << "\n";
    }
    o << "\n[output]\n";
    o << "dir = " << c.out_dir << "\n";
    return o.str();
}

inline bool operator==(const ProblemConfig& a, const ProblemConfig& b)
{
    return a.q_text == b.q_text && a.breakpoint_text == b.breakpoint_text && a.N == b.N && a.rule == b.rule
           && a.K == b.K && a.h_sinc == b.h_sinc && a.indices == b.indices && a.ranks == b.ranks && a.tol == b.tol
           && a.bisect_tol == b.bisect_tol && a.reference == b.reference && a.out_dir == b.out_dir;
}

} // namespace slfd
