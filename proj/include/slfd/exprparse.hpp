#pragma once

// Small expression language for potentials q(x).
//
//   expr   := term   { ('+' | '-') term }
//   term   := unary  { ('*' | '/') unary }
//   unary  := '-' unary | power
//   power  := atom [ '^' unary ]            (right associative)
//   atom   := number | 'x' | func '(' expr ')' | '(' expr ')'
//   func   := abs | ln | sqrt | sin | cos | exp
//   number := digits [ '.' digits ] [ ('e'|'E') ['+'|'-'] digits ]
//
// "-x^2" is -(x^2); "2^3^2" is 2^(3^2). Parentheses are kept in the tree so
// printing a parsed expression reproduces its source up to whitespace.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "slfd/errors.hpp"

namespace slfd
{

enum class ExprKind
{
    Number,
    Variable,
    Negate,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Call,
    Group,
};

enum class ExprFunc
{
    Abs,
    Ln,
    Sqrt,
    Sin,
    Cos,
    Exp,
};

struct ExprNode
{
    ExprKind kind;
    double value = 0;   // Number
    std::string text;   // number lexeme or function name
    ExprFunc func = ExprFunc::Abs;
    std::shared_ptr<const ExprNode> lhs; // operand for unary kinds
    std::shared_ptr<const ExprNode> rhs;
};

using ExprPtr = std::shared_ptr<const ExprNode>;

namespace detail
{

inline void print_node(const ExprNode& n, std::string& out)
{
    switch (n.kind)
    {
    case ExprKind::Number: out += n.text; return;
    case ExprKind::Variable: out += 'x'; return;
    case ExprKind::Negate:
        out += '-';
        print_node(*n.lhs, out);
        return;
    case ExprKind::Group:
        out += '(';
        print_node(*n.lhs, out);
        out += ')';
        return;
    case ExprKind::Call:
        out += n.text;
        out += '(';
        print_node(*n.lhs, out);
        out += ')';
        return;
    default: break;
    }
    const char* op = n.kind == ExprKind::Add   ? " + "
                     : n.kind == ExprKind::Sub ? " - "
                     : n.kind == ExprKind::Mul ? "*"
                     : n.kind == ExprKind::Div ? "/"
                                               : "^";
    print_node(*n.lhs, out);
    out += op;
    print_node(*n.rhs, out);
}

} // namespace detail

// Immutable parsed expression in one variable x.
class Expr
{
public:
    Expr() = default;
    explicit Expr(ExprPtr root) : root_(std::move(root)) {}

    const ExprNode& root() const { return *root_; }
    bool empty() const { return !root_; }

    std::string to_string() const
    {
        std::string s;
        if (root_)
            detail::print_node(*root_, s);
        return s;
    }

    // Throws NonFinite naming the first subexpression that produced inf/nan.
    template <typename Real>
    Real evaluate(Real x) const
    {
        return eval_node<Real>(*root_, x);
    }

    // Same, but returns the raw IEEE result instead of throwing.
    template <typename Real>
    Real evaluate_unchecked(Real x) const
    {
        return eval_raw<Real>(*root_, x);
    }

private:
    template <typename Real>
    static Real apply(const ExprNode& n, Real a, Real b)
    {
        using std::abs, std::cos, std::exp, std::log, std::pow, std::sin, std::sqrt;
        switch (n.kind)
        {
        case ExprKind::Negate: return -a;
        case ExprKind::Group: return a;
        case ExprKind::Add: return a + b;
        case ExprKind::Sub: return a - b;
        case ExprKind::Mul: return a * b;
        case ExprKind::Div: return a / b;
        case ExprKind::Pow: return pow(a, b);
        case ExprKind::Call:
            switch (n.func)
            {
            case ExprFunc::Abs: return abs(a);
            case ExprFunc::Ln: return log(a);
            case ExprFunc::Sqrt: return sqrt(a);
            case ExprFunc::Sin: return sin(a);
            case ExprFunc::Cos: return cos(a);
            case ExprFunc::Exp: return exp(a);
            }
            break;
        default: break;
        }
        return Real(0);
    }

    template <typename Real>
    static Real eval_raw(const ExprNode& n, Real x)
    {
        switch (n.kind)
        {
        case ExprKind::Number: return Real(n.value);
        case ExprKind::Variable: return x;
        case ExprKind::Negate:
        case ExprKind::Group:
        case ExprKind::Call: return apply<Real>(n, eval_raw<Real>(*n.lhs, x), Real(0));
        default: return apply<Real>(n, eval_raw<Real>(*n.lhs, x), eval_raw<Real>(*n.rhs, x));
        }
    }

    template <typename Real>
    static Real eval_node(const ExprNode& n, Real x)
    {
        Real r;
        switch (n.kind)
        {
        case ExprKind::Number: return Real(n.value);
        case ExprKind::Variable: return x;
        case ExprKind::Negate:
        case ExprKind::Group:
        case ExprKind::Call: r = apply<Real>(n, eval_node<Real>(*n.lhs, x), Real(0)); break;
        default: r = apply<Real>(n, eval_node<Real>(*n.lhs, x), eval_node<Real>(*n.rhs, x)); break;
        }
        using std::isfinite;
        if (!isfinite(r))
        {
            std::string s;
            detail::print_node(n, s);
            throw NonFinite(static_cast<double>(x), s);
        }
        return r;
    }

    ExprPtr root_;
};

namespace detail
{

class Parser
{
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Expr run()
    {
        auto e = expr();
        skip_ws();
        if (pos_ != src_.size())
            throw SyntaxError(pos_, "operator or end of input");
        return Expr(std::move(e));
    }

private:
    static constexpr int max_depth = 256;

    static ExprPtr make(ExprKind k, ExprPtr lhs, ExprPtr rhs = nullptr)
    {
        auto n = std::make_shared<ExprNode>();
        n->kind = k;
        n->lhs = std::move(lhs);
        n->rhs = std::move(rhs);
        return n;
    }

    void skip_ws()
    {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r'))
            ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c)
        {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c))
            throw SyntaxError(pos_, std::string("'") + c + "'");
    }

    struct DepthGuard
    {
        Parser& p;
        explicit DepthGuard(Parser& p_) : p(p_)
        {
            if (++p.depth_ > max_depth)
                throw SyntaxError(p.pos_, "shallower nesting");
        }
        ~DepthGuard() { --p.depth_; }
    };

    ExprPtr expr()
    {
        DepthGuard guard(*this);
        auto lhs = term();
        for (;;)
        {
            if (accept('+'))
                lhs = make(ExprKind::Add, lhs, term());
            else if (accept('-'))
                lhs = make(ExprKind::Sub, lhs, term());
            else
                return lhs;
        }
    }

    ExprPtr term()
    {
        auto lhs = unary();
        for (;;)
        {
            if (accept('*'))
                lhs = make(ExprKind::Mul, lhs, unary());
            else if (accept('/'))
                lhs = make(ExprKind::Div, lhs, unary());
            else
                return lhs;
        }
    }

    ExprPtr unary()
    {
        DepthGuard guard(*this);
        if (accept('-'))
            return make(ExprKind::Negate, unary());
        return power();
    }

    ExprPtr power()
    {
        auto base = atom();
        if (accept('^'))
            return make(ExprKind::Pow, base, unary());
        return base;
    }

    static bool is_digit(char c) { return c >= '0' && c <= '9'; }
    static bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }

    ExprPtr number()
    {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && is_digit(src_[pos_]))
            ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.')
        {
            ++pos_;
            while (pos_ < src_.size() && is_digit(src_[pos_]))
                ++pos_;
        }
        if (pos_ == start + 1 && src_[start] == '.')
            throw SyntaxError(start, "digit");
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E'))
        {
            std::size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-'))
                ++p;
            if (p >= src_.size() || !is_digit(src_[p]))
                throw SyntaxError(p, "exponent digits");
            while (p < src_.size() && is_digit(src_[p]))
                ++p;
            pos_ = p;
        }
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprKind::Number;
        n->text = std::string(src_.substr(start, pos_ - start));
        const auto res = std::from_chars(n->text.data(), n->text.data() + n->text.size(), n->value);
        if (res.ec != std::errc())
            throw SyntaxError(start, "representable number");
        return n;
    }

    ExprPtr atom()
    {
        skip_ws();
        if (pos_ >= src_.size())
            throw SyntaxError(pos_, "number, 'x', function or '('");
        const char c = src_[pos_];
        if (is_digit(c) || c == '.')
            return number();
        if (c == '(')
        {
            ++pos_;
            auto inner = expr();
            expect(')');
            return make(ExprKind::Group, inner);
        }
        if (is_alpha(c))
        {
            const std::size_t start = pos_;
            while (pos_ < src_.size() && (is_alpha(src_[pos_]) || is_digit(src_[pos_])))
                ++pos_;
            const std::string_view id = src_.substr(start, pos_ - start);
            if (id == "x")
                return make(ExprKind::Variable, nullptr);
            static constexpr std::pair<std::string_view, ExprFunc> funcs[] = {
                {"abs", ExprFunc::Abs}, {"ln", ExprFunc::Ln},   {"sqrt", ExprFunc::Sqrt},
                {"sin", ExprFunc::Sin}, {"cos", ExprFunc::Cos}, {"exp", ExprFunc::Exp},
            };
            for (const auto& [fname, f] : funcs)
            {
                if (id == fname)
                {
                    expect('(');
                    auto arg = expr();
                    expect(')');
                    auto n = std::make_shared<ExprNode>();
                    n->kind = ExprKind::Call;
                    n->func = f;
                    n->text = std::string(fname);
                    n->lhs = std::move(arg);
                    return n;
                }
            }
            throw UnknownIdentifier(start, std::string(id));
        }
        throw SyntaxError(pos_, "number, 'x', function or '('");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int depth_ = 0;
};

} // namespace detail

inline Expr parse(std::string_view text)
{
    return detail::Parser(text).run();
}

template <typename Real>
Real evaluate(const Expr& e, Real x)
{
    return e.evaluate<Real>(x);
}

// Evaluates a constant expression such as "-1/3" (x is bound to 0).
template <typename Real>
Real evaluate_constant(std::string_view text)
{
    return parse(text).evaluate<Real>(Real(0));
}

} // namespace slfd
