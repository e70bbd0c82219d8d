#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dispersia {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violated by the caller (bad dimension, exponent out of range,
// aliasing grid, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Configuration rejected before any computation. `line` is 1-based, 0 when
// the location is unknown.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Non-finite value detected during time integration.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, std::size_t step)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dispersia
