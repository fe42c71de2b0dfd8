#pragma once

#include <stdexcept>

namespace levyma {

// Malformed or inconsistent configuration input. The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An operation was called outside its domain (k = 0, α ≥ k − 1/p, p ≤ β, ...).
// The CLI maps this to exit code 3.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace levyma
