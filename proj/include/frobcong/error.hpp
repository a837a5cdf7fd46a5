#pragma once

#include <stdexcept>
#include <string>

namespace frobcong {

// Base of every library error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated precondition or malformed argument.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Operands live over different coefficient rings.
class RingMismatch : public Error {
 public:
  using Error::Error;
};

// Inversion of a non-unit.
class NonUnitError : public Error {
 public:
  using Error::Error;
};

// Requested information lies at or beyond the known precision.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

// Two independent computations that must agree did not.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

// Malformed input file.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace frobcong
