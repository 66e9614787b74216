#pragma once

#include <stdexcept>
#include <string>

namespace fdtm {

/// Raised when arguments violate a documented precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for well-formed requests the library deliberately does not handle
/// (Yao graphs outside the plane, oversized brute-force oracles, ...).
class Unsupported : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// File-level failures, annotated with the offending path and row.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fdtm
