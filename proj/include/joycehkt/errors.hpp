#pragma once

#include <stdexcept>
#include <string>

namespace joycehkt {

/// Raised when user-provided data (factor labels, isotropy data, metric
/// coefficients, configuration) violates a precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an internal consistency check fails. Signals a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace joycehkt
