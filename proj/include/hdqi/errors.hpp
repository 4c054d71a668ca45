#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace hdqi {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Quantum numbers or parameters violate a state invariant.
class InvalidState : public Error {
 public:
  using Error::Error;
};

/// The requested integral does not exist for these parameters.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure hit its iteration cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// No closed form is known for this combination.
class NotAvailable : public Error {
 public:
  using Error::Error;
};

/// Short form of a number for error messages.
inline std::string format_short(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace hdqi
