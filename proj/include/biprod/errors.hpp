#pragma once

#include <stdexcept>
#include <string>

namespace biprod {

// Base class for all library errors. Subclasses distinguish caller mistakes
// (invalid_input_error, invalid_hom_error, precondition_error), rejected
// instance data (spec_invalid_error), configured limits (resource_cap_error)
// and bugs detected by internal cross-checks (internal_error). The CLI maps
// these to distinct exit codes.
class error : public std::runtime_error {
public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

class invalid_input_error : public error {
public:
  using error::error;
};

// Generator images that do not define a homomorphism.
class invalid_hom_error : public error {
public:
  using error::error;
};

// A documented precondition of an operation was violated.
class precondition_error : public error {
public:
  using error::error;
};

// Instance data fails a hypothesis of the construction it is meant for; the
// message names the failed condition.
class spec_invalid_error : public error {
public:
  using error::error;
};

// A configured cap (brute-force size, table size, dimension guard) was
// exceeded; the message names the cap.
class resource_cap_error : public error {
public:
  using error::error;
};

// An internal cross-check failed. Always a bug, never a data problem.
class internal_error : public error {
public:
  using error::error;
};

// Division by zero in exact arithmetic.
class division_error : public error {
public:
  using error::error;
};

// Binary operation on cyclotomic numbers with different conductors.
class conductor_mismatch_error : public error {
public:
  using error::error;
};

} // namespace biprod
