#pragma once

#include <stdexcept>
#include <string>

namespace ldp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Edge or ball budgets that no graph/allocation can realise.
class FeasibilityError : public Error {
 public:
  using Error::Error;
};

/// A measure expected to lie on the 1/n lattice does not.
class QuantizationError : public Error {
 public:
  using Error::Error;
};

/// Enumeration or brute-force work exceeding the configured cap.
class BudgetError : public Error {
 public:
  using Error::Error;
};

class AlphabetMismatch : public Error {
 public:
  using Error::Error;
};

/// Malformed serialized input (JSON files, CLI shorthand).
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace ldp
