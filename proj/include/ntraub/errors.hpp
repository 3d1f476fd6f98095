#pragma once

#include <stdexcept>
#include <string>

namespace ntraub {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an average function or integral.
struct DomainError : Error {
    using Error::Error;
};

/// Adaptive quadrature could not reach the requested tolerance within budget.
struct QuadratureError : Error {
    using Error::Error;
};

/// A Lipschitz-model hypothesis failed (dominance, flags, integral >= 1).
struct ModelError : Error {
    using Error::Error;
};

/// No radius satisfies the requested condition on the search interval.
struct NoRadiusError : Error {
    using Error::Error;
};

/// Bracketing search found no sign change.
struct NotFoundError : Error {
    using Error::Error;
};

struct SingularMatrixError : Error {
    using Error::Error;
};

/// Singular Jacobian encountered during an iteration step; `where` names the
/// factorization point ("x" or "y").
struct SingularJacobianError : Error {
    std::string where;
    SingularJacobianError(const std::string& msg, std::string where_)
        : Error(msg), where(std::move(where_)) {}
};

/// Not enough usable data (e.g. too few pre-saturation errors for a COC fit).
struct InsufficientDataError : Error {
    using Error::Error;
};

}  // namespace ntraub
