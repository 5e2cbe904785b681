#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ucp {

// Base for every error the library raises on bad input data or arguments.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric precondition was violated (non-positive size, score out of range...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// CSV header problems: missing, duplicated or unknown columns.
class SchemaError : public Error {
 public:
  SchemaError(std::string column, const std::string& what)
      : Error(what), column_(std::move(column)) {}
  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

// A data row failed to parse or violated a Project invariant. `row` is the
// 1-based line number in the source file (the header is line 1).
class RowError : public Error {
 public:
  RowError(std::size_t row, const std::string& what)
      : Error("row " + std::to_string(row) + ": " + what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

}  // namespace ucp
