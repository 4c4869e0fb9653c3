#pragma once

#include <stdexcept>
#include <string>

namespace dnaq {

// Malformed input: DIMACS text, circuit text, register names.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A size guard was exceeded (enumeration width, tube size, qubit limit).
class GuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke an operation's precondition (length mismatch, variable
// collision, empty tube, bad gate indices, zero-probability selection).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace dnaq
