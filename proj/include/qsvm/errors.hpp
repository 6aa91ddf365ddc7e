#pragma once

#include <stdexcept>
#include <string>

namespace qsvm {

/// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid parameter/flag combination (CLI exit code 2).
struct ConfigError : Error {
    using Error::Error;
};

/// Dataset I/O, parse, or schema problem (CLI exit code 3).
struct DataError : Error {
    using Error::Error;
};
struct ParseError : DataError {
    using DataError::DataError;
};
struct SchemaError : DataError {
    using DataError::DataError;
};

/// Numerical failure (CLI exit code 4).
struct NumericError : Error {
    using Error::Error;
};
struct SingularMatrixError : NumericError {
    using NumericError::NumericError;
};
struct StarvedPostSelectionError : NumericError {
    using NumericError::NumericError;
};
struct InvalidRotationError : NumericError {
    using NumericError::NumericError;
};

// Contract violations on library calls.
struct CapacityError : Error {
    using Error::Error;
};
struct IndexError : Error {
    using Error::Error;
};
struct ShapeError : Error {
    using Error::Error;
};
struct PreconditionError : Error {
    using Error::Error;
};
struct DegenerateVectorError : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct DegenerateSplitError : PreconditionError {
    using PreconditionError::PreconditionError;
};

} // namespace qsvm
