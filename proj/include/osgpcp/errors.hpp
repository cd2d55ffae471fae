#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace osgpcp {

/// Caller supplied something outside an operation's domain.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A factorization or solve failed even after stabilization.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed CSV input. `row()` is the 1-based data row (0 for header / file level).
class CsvError : public InputError {
public:
    enum class Kind { MissingFile, EmptyFile, MissingColumn, NonNumeric, RaggedRow };

    CsvError(Kind kind, std::size_t row, const std::string& what)
        : InputError(what), kind_(kind), row_(row) {}

    Kind kind() const noexcept { return kind_; }
    std::size_t row() const noexcept { return row_; }

private:
    Kind kind_;
    std::size_t row_;
};

}  // namespace osgpcp
