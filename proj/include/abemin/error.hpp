#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace abemin {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed formula or circuit text. `position` is a 0-based byte offset
/// into the input (or into the offending line when `line` is nonzero).
class ParseError : public Error {
public:
  ParseError(const std::string& message, std::size_t position, std::size_t line = 0)
      : Error(format(message, position, line)), position_(position), line_(line) {}

  std::size_t position() const noexcept { return position_; }
  std::size_t line() const noexcept { return line_; }

private:
  static std::string format(const std::string& message, std::size_t position, std::size_t line) {
    std::string out;
    if (line != 0) {
      out += "line " + std::to_string(line) + ", ";
    }
    out += "column " + std::to_string(position + 1) + ": " + message;
    return out;
  }

  std::size_t position_;
  std::size_t line_;
};

/// Input used negation or another operator outside the monotone fragment.
class NonMonotoneError : public ParseError {
public:
  using ParseError::ParseError;
};

class MissingAttributeError : public Error {
public:
  explicit MissingAttributeError(const std::string& attribute)
      : Error("assignment does not cover attribute '" + attribute + "'"), attribute_(attribute) {}

  const std::string& attribute() const noexcept { return attribute_; }

private:
  std::string attribute_;
};

class UniverseTooLargeError : public Error {
public:
  UniverseTooLargeError(std::size_t variables, std::size_t bound)
      : Error("exhaustive check over " + std::to_string(variables) +
              " variables exceeds the bound of " + std::to_string(bound) +
              "; use sampled mode instead"),
        variables_(variables), bound_(bound) {}

  std::size_t variables() const noexcept { return variables_; }
  std::size_t bound() const noexcept { return bound_; }

private:
  std::size_t variables_;
  std::size_t bound_;
};

class InvalidCircuitError : public Error {
public:
  using Error::Error;
};

class UnfoldTooLargeError : public Error {
public:
  using Error::Error;
};

/// A rewrite site was applied to a formula other than the one it was found in.
class StaleSiteError : public Error {
public:
  using Error::Error;
};

class GenerationError : public Error {
public:
  GenerationError(const std::string& message, std::size_t attempts)
      : Error(message + " (gave up after " + std::to_string(attempts) + " attempts)"),
        attempts_(attempts) {}

  std::size_t attempts() const noexcept { return attempts_; }

private:
  std::size_t attempts_;
};

class TimeLimitExceeded : public Error {
public:
  TimeLimitExceeded() : Error("time limit exceeded") {}
};

/// An optimizer produced a formula that is not equivalent to its input, or a
/// similar internal guarantee broke. Always a bug.
class InvariantViolation : public Error {
public:
  using Error::Error;
};

} // namespace abemin
