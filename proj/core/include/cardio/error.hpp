#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cardio {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. `line` is the 1-based physical line (the header is
/// line 1); `row` is the 1-based data row, 0 for header problems.
class LoadError : public Error {
 public:
  LoadError(std::string path, std::size_t line, std::size_t row, const std::string& what)
      : Error(path + ":" + std::to_string(line) +
              (row > 0 ? ": row " + std::to_string(row) : std::string()) + ": " + what),
        path_(std::move(path)),
        line_(line),
        row_(row) {}

  const std::string& path() const noexcept { return path_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t row() const noexcept { return row_; }

 private:
  std::string path_;
  std::size_t line_;
  std::size_t row_;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

/// SWRL or Turtle syntax error. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) +
              ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace cardio
