#pragma once

#include <stdexcept>
#include <string>

namespace predbound {

/// Base class for every error raised by the library. The CLI maps the
/// concrete subclasses onto process exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed arguments: non-finite values, negative lengths, mismatched sizes.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A ProcessModel that violates its invariants (e.g. unstable AR polynomial).
class ModelInvalid : public Error {
public:
    using Error::Error;
};

/// Data on which the requested quantity is ill-posed (ties, constant series,
/// rank-deficient designs).
class DegenerateData : public Error {
public:
    using Error::Error;
};

/// Too few samples for the requested window, lag, or FFT size.
class InsufficientData : public Error {
public:
    using Error::Error;
};

class NotImplemented : public Error {
public:
    using Error::Error;
};

}  // namespace predbound
