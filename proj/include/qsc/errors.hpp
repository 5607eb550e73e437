#pragma once

#include <stdexcept>
#include <string>

namespace qsc {

// Argument outside the mathematical domain of an operation (log of zero,
// p = 0 norm, negative time, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Subsystem, alphabet or matrix shapes that do not fit together.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A theorem-level precondition does not hold (n below threshold, t below the
// hypercontractive time, domination violated, ...).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Enumeration or dimension cap exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data fails validation (model files, states, distributions).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace qsc
