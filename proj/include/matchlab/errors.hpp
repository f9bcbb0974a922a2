#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace matchlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Input data violates a structural or semantic contract.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A p = 1 edge was asked to be split; it has no finite log-weight.
class UnsplittableError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Malformed instance or solution document.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Input is too large for an exhaustive routine.
class CapabilityError : public Error {
public:
    using Error::Error;
};

/// A derived quantity is undefined (e.g. a ratio with a nonpositive denominator).
class UndefinedError : public Error {
public:
    using Error::Error;
};

/// No solution exists for the requested parameters.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// Iterative solve hit its cap; carries the last iterate.
class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& what, std::vector<double> last_iterate)
        : Error(what), last_iterate_(std::move(last_iterate)) {}

    const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }

private:
    std::vector<double> last_iterate_;
};

} // namespace matchlab
