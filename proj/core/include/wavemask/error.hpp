#pragma once

#include <stdexcept>
#include <string>

namespace wavemask {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad user configuration: unknown attribute, unsupported wavelet, empty goal set.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Incompatible lengths or levels.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// The masking pipeline cannot produce a valid signal.
class MaskingError : public Error {
public:
    using Error::Error;
};

/// The goal inequalities admit no solution.
class InfeasibleGoalsError : public MaskingError {
public:
    using MaskingError::MaskingError;
};

/// Malformed or inconsistent input data.
class DataError : public Error {
public:
    using Error::Error;
};

/// A broken internal invariant. Reaching one is a bug.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace wavemask
