#pragma once

#include <stdexcept>
#include <string>

namespace kssim {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument or parameter set was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Failure of the numerical machinery itself (CFL, linear solves, singular drift).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class CflViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularDrift : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class LinearSolveError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Malformed or invalid experiment configuration. `key()` names the offending dotted key.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace kssim
