#pragma once

#include <stdexcept>

namespace pps {

// Contract violations on inputs: wrong shapes, non-Hermitian observables,
// non-states. Thrown before any computation happens.
struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NotHermitian : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NotPsd : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InvalidState : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
// Zero or linearly dependent vectors where independence is required.
struct DegenerateInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Well-formed inputs for which the requested quantity does not exist.
struct WeakValueUndefined : std::domain_error {
    using std::domain_error::domain_error;
};
struct ResidualUndefined : std::domain_error {
    using std::domain_error::domain_error;
};
struct EqualityIndeterminate : std::domain_error {
    using std::domain_error::domain_error;
};

// A guard tripped at runtime: a quantity that must be real/nonnegative by
// theory came out outside its numerical tolerance band.
struct NumericalInconsistency : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Malformed scenario input (unknown fields, bad shapes, wrong version).
struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace pps
