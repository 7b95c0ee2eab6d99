#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace loclab {

// Malformed input, violated precondition, or otherwise unusable arguments.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : InputError(what + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// A theorem's hypothesis does not hold for the given instance.
class PreconditionError : public InputError {
 public:
  using InputError::InputError;
};

// A polynomial system containing the constant 1.
class UnsatisfiableSystem : public InputError {
 public:
  using InputError::InputError;
};

// An enumeration would exceed one of the configured caps.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace loclab
