#pragma once

#include <stdexcept>
#include <string>

namespace qbell {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shape mismatch, wrong dimension or out-of-domain label.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Failed density-matrix invariant. `magnitude()` is the offending quantity
/// (max-norm deviation, trace deviation or the negative eigenvalue).
class ValidationError : public Error {
public:
    ValidationError(const std::string& what, double magnitude)
        : Error(what), magnitude_(magnitude) {}

    double magnitude() const noexcept { return magnitude_; }

private:
    double magnitude_;
};

class HermiticityError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class TraceError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NegativeEigenvalueError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NonUnitaryError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Parameter outside the admissible domain of a construction (e.g. x <= max|f_j|).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed JSON input; line and column are 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Well-formed JSON that does not follow the matrix file schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

}  // namespace qbell
