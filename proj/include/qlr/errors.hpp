#pragma once

#include <stdexcept>
#include <string>

namespace qlr {

/// Bad input: wrong shapes, out-of-range ranks, malformed files. CLI exit code 1.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Operand shapes do not conform.
class DimensionError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A 4m x 4n real matrix does not have the quaternion block pattern.
class StructureError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// An iterative kernel ran out of budget. CLI exit code 2.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qlr
