#pragma once

#include <stdexcept>
#include <string>

namespace mfgn {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A gamma/Pochhammer argument landed on a non-positive integer.
class PoleError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Iterative method or quadrature failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Result violated an internal consistency check (e.g. imaginary residue).
class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Levinson recursion or a factorization hit a non-positive pivot.
class BreakdownError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mfgn
