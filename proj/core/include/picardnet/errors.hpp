#pragma once

#include <stdexcept>
#include <string>

namespace picardnet {

// Incompatible tensor or layer shapes.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Invalid argument values (non-finite weights, bad ranges, t >= T, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed serialized input; the message names the first offending field.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configured resource budget (sample count, parameter count) was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested operation needs an optional piece the object does not carry
// (exact solution, network form of f or g).
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace picardnet
