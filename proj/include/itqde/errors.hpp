// errors.hpp — exception taxonomy shared by all modules.

#pragma once

#include <stdexcept>
#include <string>

namespace itqde {

// Model construction rejected (bad lattice, L < 2, ...).
struct invalid_model_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Scalar parameter out of range (odd m, dtau <= 0, ...).
struct parameter_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Structural mismatch between inputs (dimensions, missing labels, non-Hermitian data).
struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Request exceeds the configured dense-realization cap.
struct resource_limit_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Every value in the requested steady-state window was flagged singular.
struct no_steady_state_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace itqde
