#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace regcalc {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed expression / .fn / .seq text. Carries the byte offset of the first
// offending token and a human-readable description of what was expected there.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset, std::string expected)
        : Error(what + " at offset " + std::to_string(offset) +
                (expected.empty() ? "" : " (expected " + expected + ")")),
          offset_(offset),
          expected_(std::move(expected)) {}

    std::size_t offset() const { return offset_; }
    const std::string& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

// Expression evaluated outside its domain (log of a nonpositive number, 0^-1, ...).
// The message names the offending subexpression.
class EvalError : public Error {
public:
    explicit EvalError(const std::string& what) : Error(what) {}
    EvalError(const std::string& what, std::string node)
        : Error(what + " in '" + node + "'"), node_(std::move(node)) {}

    const std::string& node() const { return node_; }

private:
    std::string node_;
};

// Symbolic differentiation hit a node with no derivative (abs at its kink is
// handled; this fires for structural impossibilities).
class DiffError : public Error {
public:
    using Error::Error;
};

// Arithmetic on extended reals produced an indeterminate form.
class ExtRealError : public Error {
public:
    using Error::Error;
};

// Point lies outside a function's open domain.
class DomainError : public Error {
public:
    using Error::Error;
};

// A family-backed function was asked about a point beyond the validated
// horizon in a way that cannot be answered from the formulas alone.
class HorizonError : public Error {
public:
    using Error::Error;
};

// Piecewise-function construction failed validation (gaps, overlap,
// non-monotone bounds, cells of nonpositive width, ...).
class ConstructionError : public Error {
public:
    using Error::Error;
};

// A one-sided limit required for regulated-ness does not exist or is infinite
// at an interior point.
class NotRegulatedError : public ConstructionError {
public:
    using ConstructionError::ConstructionError;
};

// An operation's stated precondition does not hold for the given inputs.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Adaptive quadrature could not reach tolerance within its subdivision cap.
class QuadratureError : public Error {
public:
    using Error::Error;
};

// Fundamental-theorem check detected a jump of the integrand's primitive at a
// point the integrator gives zero mass.
class ACViolationError : public Error {
public:
    ACViolationError(const std::string& what, double x) : Error(what), x_(x) {}
    double where() const { return x_; }

private:
    double x_;
};

// Witness search exhausted its finest grid.
class WitnessNotFoundError : public Error {
public:
    WitnessNotFoundError(const std::string& what, int resolution)
        : Error(what), resolution_(resolution) {}
    int resolution() const { return resolution_; }

private:
    int resolution_;
};

}  // namespace regcalc
