#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pps/states.hpp"

namespace pps {

// Derivative-free optimization over post-selections: seeded multi-restart
// coordinate pattern search on hypersphere/phase angles. Objectives are
// cheap and low-dimensional, so no gradients are needed.

struct SearchConfig {
    int restarts = 16;
    int max_iters = 400;
    double step_init = 0.5;   // radians
    double step_min = 1e-6;   // radians
    std::uint64_t rng_seed = 0;
};

struct SearchResult {
    PureState best_phi;
    double best_objective = 0.0;
    std::vector<double> trace; // best value found by each restart, in order
    bool converged = false;    // winning restart decayed its step below step_min
};

// A named objective over pure states of a fixed dimension. Infeasible
// candidates (e.g. post-selections orthogonal to the pre-selection) must
// evaluate to the worst value (+/-infinity), never throw.
struct Objective {
    std::string name;
    int dim = 0;
    bool maximize = false;
    std::function<double(const PureState&)> fn;
};

// Maximize the refactored product bound rhs (commutator form) over phi.
Objective objective_stronger_ur_rhs(const Observable& a, const Observable& b,
                                    const PureState& psi);

// Minimize the single post-selection correlator upper bound over phi.
Objective objective_otoc_pps_bound(const UnitaryOp& v, const UnitaryOp& w_t,
                                   const DensityMatrix& rho);

// Minimize the saturation residual (best of both signs) over phi.
Objective objective_intelligent_residual(const Observable& a, const Observable& b,
                                         const PureState& psi);

// Pattern search over 2(dim-1) angles (global phase gauge-fixed): per
// restart, sweep coordinates with +/-step probes, halve the step after a
// sweep with no improvement, stop at step_min or max_iters. Deterministic
// given config.rng_seed; the lowest restart index wins ties.
SearchResult optimize_postselection(const Objective& objective, int dim,
                                    const SearchConfig& config = SearchConfig{});

} // namespace pps
