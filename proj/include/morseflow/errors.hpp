#pragma once

#include <stdexcept>
#include <string>

namespace morseflow {

// Bad inputs, broken invariants, malformed configs. CLI maps this to exit 2.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical failure (non-convergence, singular solve). CLI maps this to exit 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace morseflow
