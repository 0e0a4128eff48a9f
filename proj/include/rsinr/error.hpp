#pragma once

#include <stdexcept>
#include <string>

namespace rsinr {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A coordinate, timestamp or interval lies outside the valid domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration, mismatched shapes, or inconsistent inputs.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Non-finite loss or gradient during optimization.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace rsinr
