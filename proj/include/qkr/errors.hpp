#ifndef QKR_ERRORS_HPP
#define QKR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qkr {

// Bad user-facing input: config files, CLI values, out-of-range parameters.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Mathematically invalid argument to a library call.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Propagation or linear-algebra failure at runtime.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Population reached the top of the truncated basis.
struct TruncationLeakError : NumericalError {
    using NumericalError::NumericalError;
};

// A finite-width pulse was passed to the delta-kick propagator (or vice versa).
struct WrongModelError : DomainError {
    using DomainError::DomainError;
};

// Ensemble averaging is missing results for a nonzero-weight member.
struct IncompleteEnsembleError : DomainError {
    using DomainError::DomainError;
};

} // namespace qkr

#endif
