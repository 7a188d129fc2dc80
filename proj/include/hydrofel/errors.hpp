#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hydrofel {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument outside the domain of a formula (non-positive length, T <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A result that violates an invariant, e.g. a polarization fraction above 1.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Zero polarization: the field has no drive and the scale factors diverge.
class DegenerateCouplingError : public Error {
 public:
  using Error::Error;
};

/// No window of exponential growth in a trace.
class InsufficientGrowthError : public Error {
 public:
  using Error::Error;
};

/// No qualifying amplitude peak in a trace.
class NotSaturatedError : public Error {
 public:
  using Error::Error;
};

/// Invalid or incomplete configuration. `line()` is 0 when the problem is not
/// tied to a specific line (e.g. a missing key).
class ConfigError : public Error {
 public:
  ConfigError(std::string message, std::size_t line = 0)
      : Error(std::move(message)), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace hydrofel
