#pragma once

#include <stdexcept>
#include <string>

namespace cloudprice {

/// Raised when an argument or input file violates a documented invariant.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when no price vector (or schedule) can satisfy the capacity constraints.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cloudprice
