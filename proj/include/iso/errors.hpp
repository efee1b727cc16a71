#pragma once

#include <stdexcept>
#include <string>

namespace iso {

// Thrown when an algorithm breaks down numerically (NaN in an integrand,
// step-size underflow, exhausted iteration budget).  Distinct from
// std::invalid_argument, which is reserved for malformed inputs.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by the shooting solver when no sign change in the terminal
// classification could be located.  Carries the sweep trace in what().
class bracket_error : public numerical_error {
 public:
  explicit bracket_error(const std::string& what) : numerical_error(what) {}
};

}  // namespace iso
