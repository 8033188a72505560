#pragma once

#include <stdexcept>
#include <string>

namespace fairqa {

/// Process exit codes used by the command-line front end.
enum class ErrorKind : int {
    Config = 2,     ///< schema, argument or precondition violation
    Numerical = 3,  ///< solver failed to converge or lost accuracy
    Capacity = 4,   ///< problem too large for an exact method
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

struct NumericalError : Error {
    explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

struct CapacityError : Error {
    explicit CapacityError(const std::string& what) : Error(ErrorKind::Capacity, what) {}
};

// Finer-grained failures. They keep the exit code of their base.

struct InconsistentManifoldError : ConfigError {
    using ConfigError::ConfigError;
};

struct OrderConflictError : ConfigError {
    using ConfigError::ConfigError;
};

struct EmbeddingError : ConfigError {
    using ConfigError::ConfigError;
};

struct UnsupportedTransformError : ConfigError {
    using ConfigError::ConfigError;
};

struct DegenerateIntermediateError : NumericalError {
    using NumericalError::NumericalError;
};

struct StepSizeError : NumericalError {
    using NumericalError::NumericalError;
};

} // namespace fairqa
