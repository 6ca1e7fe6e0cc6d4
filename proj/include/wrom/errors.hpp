#pragma once

#include <stdexcept>
#include <string>

namespace wrom {

/// Raised when an iterative or factorization step fails to produce a usable result.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an object is asked for something it was not prepared for.
class InvalidState : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace wrom
