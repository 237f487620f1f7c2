#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sstat {

/// Base class for all engine errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// File-system level failure (missing file, unreadable path, short write).
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

/// Structural problem in an on-disk artifact: bad magic, unsupported
/// version, truncation, size/layout mismatch.
class FormatError : public Error {
public:
    explicit FormatError(const std::string& what) : Error(what) {}
};

/// A CSV field that does not parse, or a line with the wrong field count.
/// Row and column are 1-based, counting data rows (a header line is not a
/// data row).
class CsvParseError : public Error {
public:
    CsvParseError(std::uint64_t row, std::size_t column, std::string text,
                  const std::string& what)
        : Error(what), row_(row), column_(column), text_(std::move(text)) {}

    std::uint64_t row() const { return row_; }
    std::size_t column() const { return column_; }
    const std::string& text() const { return text_; }

private:
    std::uint64_t row_;
    std::size_t column_;
    std::string text_;
};

/// Operands with incompatible schemas or precision modes.
class SchemaMismatchError : public Error {
public:
    explicit SchemaMismatchError(const std::string& what) : Error(what) {}
};

/// Non-finite value encountered during accumulation. Row is absolute
/// (0-based), column is 0-based.
class NonFiniteError : public Error {
public:
    NonFiniteError(std::uint64_t row, std::size_t column, const std::string& what)
        : Error(what), row_(row), column_(column) {}

    std::uint64_t row() const { return row_; }
    std::size_t column() const { return column_; }

private:
    std::uint64_t row_;
    std::size_t column_;
};

/// A variance that is zero or negative makes the correlation matrix
/// undefined. Carries the offending column positions (indices into the
/// matrix that was being normalized).
class CancellationError : public Error {
public:
    CancellationError(std::vector<std::size_t> columns, const std::string& what)
        : Error(what), columns_(std::move(columns)) {}

    const std::vector<std::size_t>& columns() const { return columns_; }

private:
    std::vector<std::size_t> columns_;
};

/// A per-chunk job failed inside a parallel reduction.
class ReductionError : public Error {
public:
    ReductionError(std::size_t range_index, const std::string& what)
        : Error(what), range_index_(range_index) {}

    std::size_t range_index() const { return range_index_; }

private:
    std::size_t range_index_;
};

} // namespace sstat
