#pragma once

#include <stdexcept>
#include <string>

namespace fracdisc {

// Base for every numerical failure raised by the library. Usage errors
// (bad arguments) are reported with std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ZeroPolynomial : public Error {
 public:
  ZeroPolynomial() : Error("polynomial is identically zero") {}
};

// The constrained Pade system (den[0] = 1) has no solution.
class DegenerateSystem : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class Overflow : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

// Leading divisor of the IIR update vanishes.
class SingularUpdate : public Error {
 public:
  using Error::Error;
};

// Denominator vanishes at a frequency grid point.
class PoleOnGrid : public Error {
 public:
  using Error::Error;
};

}  // namespace fracdisc
