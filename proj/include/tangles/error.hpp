#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tangles {

/// Invalid data or parameters supplied by the caller.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed CSV input. Data rows are numbered from 1; row 0 is the header.
/// `column` is the header name of the offending cell, empty for whole-row errors.
class ParseError : public ValidationError {
public:
  ParseError(std::size_t row, std::string column, std::string text, const std::string& what)
      : ValidationError((row == 0 ? std::string("header") : "row " + std::to_string(row)) +
                        (column.empty() ? "" : ", column " + column) + ": " + what),
        row_(row), column_(std::move(column)), text_(std::move(text)) {}

  std::size_t row() const { return row_; }
  const std::string& column() const { return column_; }
  const std::string& text() const { return text_; }

private:
  std::size_t row_;
  std::string column_;
  std::string text_;
};

/// The exhaustive oracle was asked to run above its feature cap.
class CapExceeded : public ValidationError {
public:
  using ValidationError::ValidationError;
};

} // namespace tangles
