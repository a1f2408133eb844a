#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kdebw {

/// Base of every error raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A real value (or an operation result) falls outside the Q32.32 range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Checked fixed-point arithmetic lost significant bits.
class OverflowError : public Error {
 public:
  using Error::Error;
};

class DivByZeroError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function (ln of a non-positive value, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The Remez exchange did not equioscillate within its iteration budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Sample variance is zero (all points equal, within one ulp).
class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Fewer than two observations.
class EmptyInputError : public Error {
 public:
  using Error::Error;
};

}  // namespace kdebw
