#pragma once

#include <stdexcept>
#include <string>

namespace mixssl {

// Base class for every error raised by the library. The CLI maps the three
// families below onto distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed inputs: shape mismatches, invalid values, bad parameters.
class InputError : public Error {
 public:
  using Error::Error;
};

class InputShapeError : public InputError {
 public:
  using InputError::InputError;
};

class DegenerateCovariateError : public InputError {
 public:
  DegenerateCovariateError(const std::string& what, std::size_t column)
      : InputError(what), column_(column) {}
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

class ParameterError : public InputError {
 public:
  using InputError::InputError;
};

// Numerical failures: loss of positive-definiteness, divergence.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConditioningError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace mixssl
