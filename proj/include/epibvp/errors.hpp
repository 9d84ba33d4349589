#pragma once

#include <stdexcept>
#include <string>

namespace epibvp {

/// Base class for every failure raised by the solver library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A series operation would produce a term with a negative power of t.
class NegativeExponent : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested outside the function's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The c-equation has no real root in the searched bracket.
class NoRealRoot : public Error {
 public:
  using Error::Error;
};

/// Shift parameter k lies outside the Green's kernel validity range.
class OutOfValidity : public Error {
 public:
  using Error::Error;
};

/// No upper-solution seed of the form -Ct(A - sqrt(2t)) covers lambda.
class NoAdmissibleSeed : public Error {
 public:
  using Error::Error;
};

/// Monotone iterates broke the ordering chain beyond tolerance.
class OrderingViolation : public Error {
 public:
  using Error::Error;
};

/// Existence still holds at the upper end of the lambda bracket.
class BracketFailure : public Error {
 public:
  using Error::Error;
};

/// Invalid user-supplied configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace epibvp
