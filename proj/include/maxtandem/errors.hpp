#pragma once

#include <stdexcept>
#include <string>

namespace maxtandem {

// Operand dimensions do not fit the operation.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A value lies outside the domain of the operation (negative service
// time, epsilon where a finite value is required, zero power bound...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NotInvertibleError : public DomainError {
 public:
  using DomainError::DomainError;
};

// x = A x + b was given a matrix that is not nilpotent within its order.
class NoUniqueSolutionError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Model topology, strategy or configuration document is unsupported or
// inconsistent.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computed quantity violates a model invariant; indicates a bug rather
// than bad input.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace maxtandem
