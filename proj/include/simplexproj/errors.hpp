#pragma once

#include <stdexcept>
#include <string>

namespace simplexproj {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input violated a documented precondition or invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A computation could not be carried out at working precision.
class NumericalError : public Error {
public:
    using Error::Error;
};

class NotSquare : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NotSymmetric : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NotPositiveDefinite : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DimensionMismatch : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DegenerateMetric : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DimensionTooLarge : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class TooFewSamples : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NonPositivePrice : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class EmptyPanel : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class MisalignedBenchmark : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class InvalidWeights : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A linear system's pivot fell below the breakdown threshold.
class SingularSystem : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace simplexproj
