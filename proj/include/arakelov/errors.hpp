#pragma once

#include <stdexcept>
#include <string>

namespace arakelov {

// Base of every library error. The CLI maps the three families below onto
// exit codes 1 (validation), 2 (numeric) and 3 (budget).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class UnsupportedFieldError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class IllConditionedError : public NumericError {
 public:
  using NumericError::NumericError;
};

class DomainError : public NumericError {
 public:
  using NumericError::NumericError;
};

class PoleError : public NumericError {
 public:
  using NumericError::NumericError;
};

class BudgetExceededError : public Error {
 public:
  using Error::Error;
};

}  // namespace arakelov
