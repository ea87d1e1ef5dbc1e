#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace latmove {

// Base for everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input: precondition violations, unknown ids, out-of-range values.
// The CLI maps this family to exit code 1.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Filesystem problems (missing file, unwritable directory). Exit code 2.
class IoError : public Error {
public:
    IoError(const std::string& path, const std::string& what)
        : Error("io error [" + path + "]: " + what), path_(path) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class UnknownIdentifierError : public ValidationError {
public:
    explicit UnknownIdentifierError(const std::string& id)
        : ValidationError("unknown identifier: " + id), id_(id) {}

    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

class ShapeMismatchError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Malformed CSV content; carries the 1-based line number (header is line 1).
class CsvFormatError : public ValidationError {
public:
    CsvFormatError(const std::string& path, std::size_t line, const std::string& what)
        : ValidationError(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Eigensolver hit max iterations; keeps the last residual for diagnostics.
class ConvergenceError : public Error {
public:
    ConvergenceError(int iterations, double last_residual)
        : Error("eigensolver did not converge after " + std::to_string(iterations) +
                " iterations (residual " + std::to_string(last_residual) + ")"),
          last_residual_(last_residual) {}

    double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

} // namespace latmove
