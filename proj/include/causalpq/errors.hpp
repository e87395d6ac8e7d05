#pragma once

#include <stdexcept>
#include <string>

namespace causalpq {

// Base class for all library errors. The CLI maps subclasses to exit codes:
// ValidationError -> 1, CapacityError -> 2, IoError -> 3.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad arguments, malformed models, violated preconditions.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// An exact computation would exceed a hard enumeration bound.
class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

// Rejection sampling exhausted its retry budget.
class GenerationError : public ValidationError {
 public:
  explicit GenerationError(const std::string& msg) : ValidationError(msg) {}
};

// Planner inputs describe a parameterization with no identifiable margin
// (gamma = 0 or w_min = 0).
class FaithfulnessError : public ValidationError {
 public:
  explicit FaithfulnessError(const std::string& msg) : ValidationError(msg) {}
};

// A conditional estimate had an empty conditioning set; the caller must
// raise the per-query sample count.
class DegenerateSampleError : public Error {
 public:
  explicit DegenerateSampleError(const std::string& msg) : Error(msg) {}
};

}  // namespace causalpq
