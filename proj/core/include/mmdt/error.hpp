#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mmdt {

/// Raised when an input violates a documented precondition (shapes, ranges,
/// non-finite values).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by the dataset readers. `line()` is 1-based; 0 means the error is
/// not tied to a particular line (e.g. the file could not be opened).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Raised by the alternating driver when a half-step increases the joint cost
/// by more than the allowed solver slack. This indicates an inexact or broken
/// sub-solve, never a property of the data.
class DescentViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mmdt
