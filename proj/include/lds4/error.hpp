#ifndef LDS4_ERROR_HPP
#define LDS4_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lds4 {

/// Base of every error the library raises on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller violated an operation's precondition (bad parameters, length
/// mismatch, unsupported degree, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Input is structurally valid but degenerate for the requested operation.
class DegenerateInput : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// A certified decision could not be made at the current working precision.
/// Adaptive drivers catch this and retry with more bits.
class InsufficientPrecision : public Error {
public:
    using Error::Error;
};

/// The adaptive precision cap was reached without deciding.
class PrecisionExhausted : public Error {
public:
    using Error::Error;
};

/// External service could not be reached.
class ServiceUnavailable : public Error {
public:
    using Error::Error;
};

}  // namespace lds4

#endif  // LDS4_ERROR_HPP
