#pragma once

#include <stdexcept>
#include <string>

namespace pmr {

// Parameter record violates a structural invariant (alpha <= 1, r0 <= e, ...).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnsupportedFamily : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// p vs m regime does not match the requested construction.
class UnsupportedRegime : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Evaluation outside the time domain of a barrier (t >= T for the blow-up subsolution).
class OutOfDomain : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Derivative requested on (or within 1e-9 of) a non-smooth interface.
class KinkError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InfeasibleWithinBudget : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Barrier parameters failed their feasibility report; the message names the failing entries.
class InfeasibleBarrier : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pmr
