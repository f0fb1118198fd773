#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace slfd
{

// Base of every error raised by the library. `name()` is the short tag the
// CLI prints on stderr.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
    virtual const char* name() const noexcept { return "Error"; }
};

// Problem description or parameters are unusable (bad K, breakpoint outside
// the interval, malformed config ...).
class UsageError : public Error
{
public:
    using Error::Error;
    const char* name() const noexcept override { return "UsageError"; }
};

// Numerical failure inside an otherwise valid computation.
class NumericalError : public Error
{
public:
    using Error::Error;
    const char* name() const noexcept override { return "NumericalError"; }
};

#define SLFD_DEFINE_ERROR(Name, Base)                                      \
    class Name : public Base                                               \
    {                                                                      \
    public:                                                                \
        using Base::Base;                                                  \
        const char* name() const noexcept override { return #Name; }       \
    };

SLFD_DEFINE_ERROR(InvalidParameter, UsageError)
SLFD_DEFINE_ERROR(DimensionMismatch, UsageError)
SLFD_DEFINE_ERROR(DomainError, UsageError)
SLFD_DEFINE_ERROR(EvaluationError, UsageError)
SLFD_DEFINE_ERROR(ConfigError, UsageError)

SLFD_DEFINE_ERROR(NonConvergence, NumericalError)
SLFD_DEFINE_ERROR(SingularTransfer, NumericalError)
SLFD_DEFINE_ERROR(BracketFailure, NumericalError)
SLFD_DEFINE_ERROR(NormDegenerate, NumericalError)

#undef SLFD_DEFINE_ERROR

// Parse failure; `offset` is a byte offset into the source text.
class SyntaxError : public UsageError
{
public:
    SyntaxError(std::size_t offset, std::string expected)
        : UsageError("syntax error at offset " + std::to_string(offset) + ": expected " + expected),
          offset_(offset),
          expected_(std::move(expected))
    {
    }
    const char* name() const noexcept override { return "SyntaxError"; }
    std::size_t offset() const noexcept { return offset_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

class UnknownIdentifier : public UsageError
{
public:
    UnknownIdentifier(std::size_t offset, std::string identifier)
        : UsageError("unknown identifier '" + identifier + "' at offset " + std::to_string(offset)),
          offset_(offset),
          identifier_(std::move(identifier))
    {
    }
    const char* name() const noexcept override { return "UnknownIdentifier"; }
    std::size_t offset() const noexcept { return offset_; }
    const std::string& identifier() const noexcept { return identifier_; }

private:
    std::size_t offset_;
    std::string identifier_;
};

// An expression produced inf/nan. Usually means the potential has a singular
// point that was not declared as a breakpoint.
class NonFinite : public EvaluationError
{
public:
    NonFinite(double x, std::string subexpression)
        : EvaluationError("non-finite value of '" + subexpression + "' at x = " + std::to_string(x)),
          x_(x),
          subexpression_(std::move(subexpression))
    {
    }
    const char* name() const noexcept override { return "NonFinite"; }
    double x() const noexcept { return x_; }
    const std::string& subexpression() const noexcept { return subexpression_; }

private:
    double x_;
    std::string subexpression_;
};

} // namespace slfd
