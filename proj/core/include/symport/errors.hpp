#pragma once

#include <stdexcept>
#include <string>

namespace symport {

/// Base for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad input data or configuration; CLI maps these to exit code 2.
struct ConfigError : Error {
    using Error::Error;
};

/// Numerical failure during a run; CLI maps these to exit code 1.
struct NumericalError : Error {
    using Error::Error;
};

struct UnsupportedGroup : ConfigError {
    using ConfigError::ConfigError;
};
struct UnknownIrrep : ConfigError {
    using ConfigError::ConfigError;
};
struct UnknownOp : ConfigError {
    using ConfigError::ConfigError;
};
struct ParseError : ConfigError {
    using ConfigError::ConfigError;
};
struct DegenerateTriangle : ConfigError {
    using ConfigError::ConfigError;
};
struct NonManifoldEdge : ConfigError {
    using ConfigError::ConfigError;
};
struct SymmetryBroken : ConfigError {
    using ConfigError::ConfigError;
};
struct NegativeResistivity : ConfigError {
    using ConfigError::ConfigError;
};
struct InvalidPosition : ConfigError {
    using ConfigError::ConfigError;
};
struct SourceOutsideGenerator : ConfigError {
    using ConfigError::ConfigError;
};
struct EmptySet : ConfigError {
    using ConfigError::ConfigError;
};
struct CombinatorialBudgetExceeded : ConfigError {
    using ConfigError::ConfigError;
};

struct SingularMatrix : NumericalError {
    using NumericalError::NumericalError;
};
struct NotInvariant : NumericalError {
    using NumericalError::NumericalError;
};
struct NotInColumnSpace : NumericalError {
    using NumericalError::NumericalError;
};
struct ZeroRadiatedPower : NumericalError {
    using NumericalError::NumericalError;
};
struct ZeroExcitation : NumericalError {
    using NumericalError::NumericalError;
};
struct SingularB : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace symport
