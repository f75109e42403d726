#pragma once

#include <stdexcept>

namespace polyfold {

// Mathematical precondition failures (non-transversal degree request,
// degree mismatch, compactness not controlled, ...). CLI exit code 3.
struct MathPreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The regular-value sampling budget ran out. CLI exit code 4.
struct BudgetExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace polyfold
