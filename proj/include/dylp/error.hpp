#pragma once

#include <stdexcept>
#include <string>

namespace dylp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed network structure: non-contiguous steps, directedness mismatch,
/// unregistered endpoints.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// A metric is undefined for its input, e.g. AUC with no negatives.
class UndefinedMetricError : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class InsufficientHistoryError : public Error {
public:
    using Error::Error;
};

class EmptyNetworkError : public Error {
public:
    using Error::Error;
};

}  // namespace dylp
