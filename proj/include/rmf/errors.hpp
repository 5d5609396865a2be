#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rmf {

// Base for every error raised by the library. The CLI maps these to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the range a table or buffer can serve.
class BoundsError : public Error {
 public:
  using Error::Error;
};

// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A series evaluated at an exponent where it diverges.
class DivergenceError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A named parameter constraint of a probability bound is violated.
class ConstraintError : public Error {
 public:
  explicit ConstraintError(std::string constraint)
      : Error("constraint violated: " + constraint), constraint_(std::move(constraint)) {}

  const std::string& constraint() const noexcept { return constraint_; }

 private:
  std::string constraint_;
};

// An enumeration would produce more elements than the configured cap.
class CapacityError : public Error {
 public:
  CapacityError(std::size_t count, std::size_t cap)
      : Error("enumeration exceeds capacity: at least " + std::to_string(count) +
              " elements, cap " + std::to_string(cap)),
        count_(count) {}

  std::size_t count() const noexcept { return count_; }

 private:
  std::size_t count_;
};

// An input violates a structural contract (e.g. f is not completely multiplicative).
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace rmf
