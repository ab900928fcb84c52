#pragma once

#include <stdexcept>
#include <string>

namespace heatosc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The integrand produced a non-finite value.
class EvaluationError : public Error {
public:
    EvaluationError(const std::string& what, double point)
        : Error(what), point_(point) {}
    double point() const noexcept { return point_; }

private:
    double point_;
};

/// Adaptive refinement ran out of budget before reaching the tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double best_value, double best_error)
        : Error(what), best_value_(best_value), best_error_(best_error) {}
    double best_value() const noexcept { return best_value_; }
    double best_error() const noexcept { return best_error_; }

private:
    double best_value_;
    double best_error_;
};

/// A scan for a sign change found no bracket.
class SearchError : public Error {
public:
    using Error::Error;
};

/// An argument cannot be represented in double precision for this expression.
class RangeError : public Error {
public:
    using Error::Error;
};

/// The expression shape is not handled by the requested operation.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

}  // namespace heatosc
