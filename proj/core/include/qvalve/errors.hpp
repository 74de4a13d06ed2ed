// errors.hpp — Exception types shared across the qvalve library

#pragma once

#include <stdexcept>
#include <string>

namespace qvalve {

// Fock truncation below the minimum of one retained excitation.
struct InvalidTruncationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Operator/state dimension mismatch.
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// The trace-constrained steady-state system is singular: the Liouvillian
// has more than one stationary state. Carries the detected null-space
// dimension (-1 if it could not be determined).
struct DegenerateSteadyStateError : std::runtime_error {
    DegenerateSteadyStateError(const std::string& what, int null_dim)
        : std::runtime_error(what), null_space_dim(null_dim) {}
    int null_space_dim;
};

// Steady-state residual stayed above tolerance after refinement.
struct SteadyStateConvergenceError : std::runtime_error {
    SteadyStateConvergenceError(const std::string& what, double resid)
        : std::runtime_error(what), residual(resid) {}
    double residual;
};

// Adaptive integrator step size underflowed.
struct StiffnessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Trajectory violated a hard sanity bound (trace drift, positivity).
struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fock relaxation hit the time cap with excitation still above epsilon.
struct IncompleteRelaxationError : std::runtime_error {
    IncompleteRelaxationError(const std::string& what, double resid)
        : std::runtime_error(what), residual(resid) {}
    double residual;
};

// Derived quantity has a vanishing denominator (dark site, no transport).
struct UndefinedObservableError : std::domain_error {
    using std::domain_error::domain_error;
};

// Non-monotone or otherwise unusable trajectory data.
struct DataError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Frequency optimization found no defined objective anywhere on the grid.
struct OptimizationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Configuration file / override parsing and validation failures.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace qvalve
