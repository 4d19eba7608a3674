#pragma once

#include <stdexcept>
#include <string>

namespace affcut {

/// Malformed or inconsistent input: bad shapes, invalid files, out-of-range values.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Violated internal precondition, e.g. contracting an edge that does not exist.
class LogicError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace affcut
