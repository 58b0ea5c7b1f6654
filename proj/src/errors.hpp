#pragma once

#include <stdexcept>
#include <string>

namespace hypsurf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// |trace| <= 2: parabolic or elliptic element, no closed geodesic.
class NotHyperbolic : public DomainError {
 public:
  using DomainError::DomainError;
};

// The short length spectrum would be incomplete at the requested radius.
class ValidityError : public Error {
 public:
  using Error::Error;
};

class NumericsError : public Error {
 public:
  using Error::Error;
};

// Should be unreachable; signals a broken arithmetic identity.
class InternalInvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace hypsurf
