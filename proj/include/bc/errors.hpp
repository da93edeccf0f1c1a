#pragma once

#include <stdexcept>
#include <string>

namespace bc {

// Input has the wrong shape (non-square matrix, dimension mismatch).
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Input violates a mathematical precondition (non-Hermitian, not a
// projection, state outside the form domain, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// A boundary unitary has spectrum at (or too close to) the point 1 where
// the inverse Cayley transform is singular.
struct NotInvertibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An eigensolver or factorization failed to converge.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two cavities that were expected to share a constraint subspace do not;
// signals a composition bug upstream.
struct ConstraintMismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Scenario configuration is malformed or references an unknown preset.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace bc
