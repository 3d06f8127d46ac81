#pragma once

#include <stdexcept>
#include <string>

namespace scmxxz {

// Bad arguments or inconsistent configuration; maps to CLI exit code 1.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IndexOutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Observable requested outside the sector it is defined for (IPR needs q = 1).
class WrongSector : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class DecompositionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical invariant (trace, Hermiticity, magnetization) drifted past tolerance.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace scmxxz
