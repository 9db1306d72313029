#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace volkit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, double value, double err_estimate)
        : Error(what), value_(value), err_estimate_(err_estimate) {}

    [[nodiscard]] double value() const noexcept { return value_; }
    [[nodiscard]] double err_estimate() const noexcept { return err_estimate_; }

private:
    double value_;
    double err_estimate_;
};

class NonFiniteEvaluation : public Error {
public:
    NonFiniteEvaluation(const std::string& what, double at) : Error(what), at_(at) {}
    [[nodiscard]] double at() const noexcept { return at_; }

private:
    double at_;
};

/// Raised when a 3x3 matrix is too close to singular to invert.
class SingularMatrix : public Error {
public:
    SingularMatrix(const std::string& what, double determinant)
        : Error(what), determinant_(determinant) {}
    [[nodiscard]] double determinant() const noexcept { return determinant_; }

private:
    double determinant_;
};

class SeriesDivergence : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class NonPositiveVariance : public Error {
public:
    NonPositiveVariance(const std::string& what, std::size_t index)
        : Error(what), index_(index) {}
    [[nodiscard]] std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class DegenerateData : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t row, std::string column, const std::string& reason)
        : Error("parse error at row " + std::to_string(row) + ", column '" + column +
                "': " + reason),
          row_(row),
          column_(std::move(column)) {}

    [[nodiscard]] std::size_t row() const noexcept { return row_; }
    [[nodiscard]] const std::string& column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::string column_;
};

class DuplicateDate : public Error {
public:
    using Error::Error;
};

class NonPositivePrice : public Error {
public:
    using Error::Error;
};

class BootstrapAborted : public Error {
public:
    BootstrapAborted(const std::string& what, std::size_t failures)
        : Error(what), failures_(failures) {}
    [[nodiscard]] std::size_t failures() const noexcept { return failures_; }

private:
    std::size_t failures_;
};

}  // namespace volkit
