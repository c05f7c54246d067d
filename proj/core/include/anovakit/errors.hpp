#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace anovakit {

// Every failure the library can raise derives from Error and carries a stable
// machine-readable code. The CLI maps any Error to exit status 2 and prints
// the code alongside the message, so scripts can branch on it.
//
// Codes in use: "domain", "pole", "convergence", "degenerate_data", "layout",
// "unbalanced", "hypothesis", "parse".
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// Argument outside the mathematical domain (x < 0 for chi^2/F, df <= 0,
// alpha outside (0,1), non-finite data, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& m) : Error("domain", m) {}
};

// The density is unbounded at the requested point (x = 0 with df < 2).
// Raised instead of returning an infinity sentinel.
class PoleError : public Error {
public:
    explicit PoleError(const std::string& m) : Error("pole", m) {}
};

// An iterative scheme (continued fraction, quantile solve, quadrature)
// failed to reach its tolerance. The message includes diagnostics.
class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& m) : Error("convergence", m) {}
};

// The residual sum of squares is zero, so scale-relative quantities
// (semi-distances, F statistics) are undefined for this sample.
class DegenerateDataError : public Error {
public:
    explicit DegenerateDataError(const std::string& m) : Error("degenerate_data", m) {}
};

// Invalid design layout, or data/hypothesis that does not conform to one.
class LayoutError : public Error {
public:
    explicit LayoutError(const std::string& m) : Error("layout", m) {}
};

// Two-way input whose cells are missing or of unequal size.
class UnbalancedError : public Error {
public:
    explicit UnbalancedError(const std::string& m) : Error("unbalanced", m) {}
};

// A simulation state that does not satisfy the null hypothesis it is
// supposed to verify.
class HypothesisError : public Error {
public:
    explicit HypothesisError(const std::string& m) : Error("hypothesis", m) {}
};

// Malformed CSV input; line() is the 1-based offending line.
class ParseError : public Error {
public:
    ParseError(const std::string& m, long line)
        : Error("parse", m + " (line " + std::to_string(line) + ")"), line_(line) {}
    long line() const noexcept { return line_; }

private:
    long line_;
};

} // namespace anovakit
