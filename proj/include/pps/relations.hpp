#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pps/states.hpp"

namespace pps {

inline constexpr double kSaturationTol = 1e-8;
inline constexpr double kGapTol = 1e-9; // proven relations never dip below -kGapTol

// One evaluated inequality. For lower bounds gap = lhs - rhs_total; for the
// correlator upper bounds (otoc_bounds) the orientation flips so that
// gap >= -kGapTol always means "the relation held".
struct BoundReport {
    double lhs = 0.0;
    std::vector<std::pair<std::string, double>> rhs_terms;
    double rhs_total = 0.0;
    double gap = 0.0;
    bool saturated = false;
    std::optional<Complex> w_ab; // weak cross term, when the bound uses one
    std::optional<double> eps_a; // mean-square shifts of the stronger bound
    std::optional<double> eps_b;
};

// One evaluated exact decomposition; residual = lhs - rhs.
struct EqualityReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    int sign_chosen = +1;
};

// Product-of-variances bound from the commutator mean, optionally with the
// anticommutator correction.
BoundReport rhur(const Observable& a, const Observable& b, const PureState& psi,
                 bool include_schrodinger, double saturation_tol = kSaturationTol);

// Post-selected version: deviations and means conditioned on phi, cross term
// W_AB = <psi|A|phi><phi|B|psi>. Reduces to rhur when post = pre.
BoundReport pps_ur(const Observable& a, const Observable& b, const PureState& pre,
                   const PureState& post, bool include_schrodinger,
                   double saturation_tol = kSaturationTol);

// The post-selection nulling both deviations at once, when A|psi> and B|psi>
// are parallel; nullopt otherwise.
std::optional<PureState> common_zero_postselection(const Observable& a,
                                                   const Observable& b,
                                                   const PureState& psi);

// Distance from the saturation condition of the post-selected product bound:
// zero residual at either sign certifies equality.
double intelligent_residual(const Observable& a, const Observable& b,
                            const PureState& pre, const PureState& post, int sign);

// Exact product-form equality: deviation product as a quotient whose sign
// branch keeps the numerator nonnegative.
EqualityReport equality_product(const Observable& a, const Observable& b,
                                const PureState& pre, const PureState& post,
                                std::uint64_t rng_seed);

// Exact sum-form equality: sum of squared deviations as a signed commutator
// term plus a sum over the completed post-selection basis.
EqualityReport equality_sum(const Observable& a, const Observable& b,
                            const PureState& pre, const PureState& post,
                            std::uint64_t rng_seed);

// Mixed pre-selection version with cross term <phi|B rho A|phi>.
BoundReport pps_ur_mixed(const Observable& a, const Observable& b,
                         const DensityMatrix& rho, const PureState& post,
                         bool include_schrodinger,
                         double saturation_tol = kSaturationTol);

// Same bound as pps_ur with the lhs refactored into standard variances plus
// the mean-square shifts eps_X = <X>^2 - |<phi|X|psi>|^2; stays nontrivial
// where the standard bound collapses.
BoundReport stronger_ur(const Observable& a, const Observable& b,
                        const PureState& psi, const PureState& phi,
                        bool include_schrodinger,
                        double saturation_tol = kSaturationTol);

// max of the standard and post-selected bounds on both sides.
BoundReport combined_stronger(const Observable& a, const Observable& b,
                              const PureState& psi, const PureState& phi,
                              double saturation_tol = kSaturationTol);

// Sum-of-variances baseline bounds (orthogonal-state form, maximized over
// sign, and the half-variance-of-the-sum form); rhs_total is their max.
BoundReport mpur_bounds(const Observable& a, const Observable& b,
                        const PureState& psi, const PureState& psi_perp,
                        double saturation_tol = kSaturationTol);

// Sum-of-variances bound via a post-selected ladder term:
// lhs = Var(A) + Var(B), rhs = s*i*Tr([A,B]rho) + <phi|C_s' rho C_s|phi>
// with C_s = A + s iB - <A + s iB> I. Sign auto-selected (first term >= 0)
// when not provided.
BoundReport tighter_sum_ur(const Observable& a, const Observable& b,
                           const DensityMatrix& rho, const PureState& phi,
                           std::optional<int> sign = std::nullopt,
                           double saturation_tol = kSaturationTol);

// Normalized C_s|psi> (phase-fixed). Saturates the sum bound evaluated at
// relation sign -s; at sign +s only in degenerate cases (for qubits the two
// coincide because the orthocomplement is one-dimensional).
PureState tight_saturating_postselection(const Observable& a, const Observable& b,
                                         const PureState& psi, int sign);

// Product bound for unitaries: deviations sqrt(1 - <phi|U' rho U|phi>).
BoundReport unitary_pps_ur(const UnitaryOp& u, const UnitaryOp& v,
                           const DensityMatrix& rho, const PureState& phi,
                           double saturation_tol = kSaturationTol);

// F = Tr[(W' V' W V) rho]; guards |F| <= 1 and the commutator-norm identity.
Complex otoc_value(const UnitaryOp& v, const UnitaryOp& w_t, const DensityMatrix& rho);

// Upper bounds on |F|: overlap-angle baseline plus one post-selected bound
// per phi; rhs_total is the min of all of them, gap = rhs_total - lhs >= 0.
BoundReport otoc_bounds(const UnitaryOp& v, const UnitaryOp& w_t,
                        const DensityMatrix& rho, const std::vector<PureState>& phis,
                        double saturation_tol = kSaturationTol);

// Fixed instance showing that commuting observables with a common eigenstate
// pre-selection still carry a nonzero post-selected bound (the cross term is
// real there, so the anticommutator part does the work).
struct CommutingWitness {
    Observable a;
    Observable b;
    PureState psi;
    PureState phi;
    BoundReport report; // pps_ur with the anticommutator term included
};
CommutingWitness commuting_witness();

namespace test_hooks {
// Negates the weak cross term inside the pure post-selected product bound.
// Exists only so the verification sweep can demonstrate it catches a broken
// relation; never set outside that check.
extern std::atomic<bool> negate_weak_term;
} // namespace test_hooks

} // namespace pps
