#pragma once

#include <stdexcept>
#include <string>

namespace aerolex {

/// Malformed or out-of-contract input (files, coordinates, configuration).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation would exceed a configured size limit.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No feasible route exists between the requested terminals.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace aerolex
