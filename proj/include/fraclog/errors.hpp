#pragma once

#include <stdexcept>
#include <string>

namespace fraclog {

// Bad arguments or malformed input data. Maps to CLI exit code 2.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A quadrature or series did not reach its tolerance within the allowed work.
// Maps to CLI exit code 3.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parameter outside the region where an integral converges (e.g. t >= d/2 for
// the log-diffusion kernel).
class LifespanError : public InputError {
public:
    using InputError::InputError;
};

}  // namespace fraclog
