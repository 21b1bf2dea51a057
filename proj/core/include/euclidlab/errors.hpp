#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace euclidlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside the domain of the operation (non-prime where a prime
/// is required, gcd(a, m) != 1 for an order, empty subset, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A search space is larger than the configured budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::string what, std::uint64_t required, std::uint64_t budget)
      : Error(std::move(what)), required_(required), budget_(budget) {}

  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
};

/// A mechanical check found an instance contradicting a stated theorem.
class TheoremViolation : public Error {
 public:
  using Error::Error;
};

/// A bounded scan found a solution outside a lemma's stated classification.
class LemmaViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace euclidlab
