#pragma once

#include <stdexcept>
#include <string>

namespace sykgw {

/// Bad argument to a library entry point (odd N, index out of range, ...).
struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Input is well-formed but cannot be processed, e.g. normalizing a zero operator.
struct DegenerateInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An iterative kernel did not converge. Carries the last residual estimate.
struct NumericalFailure : std::runtime_error {
    NumericalFailure(const std::string& what, double residual)
        : std::runtime_error(what + " (residual estimate " + std::to_string(residual) + ")"),
          residual(residual) {}
    double residual;
};

/// A structural assumption of the construction was violated numerically.
struct InternalConsistency : std::logic_error {
    using std::logic_error::logic_error;
};

/// The normalized OTOC never reached the half-saturation threshold.
struct NoCrossing : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sykgw
