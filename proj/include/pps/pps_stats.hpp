#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "pps/states.hpp"

namespace pps {

// Decomposition of A|psi> into a component along a reference state and a
// normalized orthogonal residual scaled by the deviation.
struct AVDecomposition {
    Complex mean;          // <ref|A|psi>
    double deviation;      // >= 0
    PureState residual_state;
};

struct MetrologyReport {
    double fisher_phi;
    double fisher_max;
    // Defined only when A|psi> is nonzero (p_z) and additionally when the
    // zero-uncertainty post-selection overlaps psi (weak value).
    std::optional<double> p_z;
    std::optional<Complex> weak_value_at_phi_z;
};

// <phi|A|psi> / <phi|psi>; throws WeakValueUndefined when |<phi|psi>| <= 1e-8.
Complex weak_value(const Observable& a, const PureState& pre, const PureState& post);

// <phi|A rho|phi> / <phi|rho|phi>; throws when the denominator is <= 1e-8.
Complex weak_value_mixed(const Observable& a, const DensityMatrix& rho,
                         const PureState& post);

// sqrt(<A^2> - <A>^2) with the radicand clamp: values in [-1e-12, 0) count
// as 0, anything lower is a numerical-inconsistency error.
double std_standard(const Observable& a, const PureState& psi);

// A|psi> = <A>|psi> + <dA>|psi_perp>; requires <dA> > 1e-10.
AVDecomposition av_decompose(const Observable& a, const PureState& psi);

// sqrt(<psi|A^2|psi> - |<phi|A|psi>|^2); defined for any post-selection,
// orthogonal pre/post included.
double std_pps(const Observable& a, const PureState& pre, const PureState& post);

// A|psi> = <phi|A|psi>|phi> + deviation |phi_perp>; requires std_pps > 1e-10.
AVDecomposition pps_decompose(const Observable& a, const PureState& pre,
                              const PureState& post);

// Same value as std_pps, computed as sqrt(sum_i |<phi_i_perp|A|psi>|^2) over
// a completed orthonormal basis starting at the post-selection. Raw
// amplitudes are summed (not weak values times overlaps) so vanishing
// <phi_i_perp|psi> terms stay well-defined.
double std_pps_infotheoretic(const Observable& a, const PureState& pre,
                             const PureState& post, std::uint64_t rng_seed);

// A|psi>/sqrt(<A^2>), phase-fixed; the post-selection with zero uncertainty.
PureState zero_uncertainty_postselection(const Observable& a, const PureState& psi);

// A post-selection orthogonal to A|psi> together with the maximal deviation
// sqrt(<A^2>). When A|psi> = 0 every post-selection attains it.
std::pair<PureState, double> max_uncertainty_postselection(const Observable& a,
                                                           const PureState& psi,
                                                           std::uint64_t rng_seed);

// Pointer-estimation Fisher information at a given post-selection, with the
// zero-uncertainty probability fields when defined.
MetrologyReport metrology_report(const Observable& a, const PureState& psi,
                                 const PureState& phi, double sigma_pointer);

// sqrt(Tr(A^2 rho) - <phi|A rho A|phi>).
double std_pps_mixed(const Observable& a, const DensityMatrix& rho,
                     const PureState& phi);

// sqrt(Tr(A^2 rho) - |weak value|^2 <phi|rho|phi>); >= std_pps_mixed, equal
// exactly when rho is pure.
double std_pps_mixed_weak(const Observable& a, const DensityMatrix& rho,
                          const PureState& phi);

// Gap between the two mixed deviations (squared): the classically caused
// part of the uncertainty. Zero iff the pre-selection is pure.
double classical_uncertainty(const DensityMatrix& rho, const Observable& a,
                             const PureState& phi);

// Shared radicand guard used by every deviation above.
double clamped_sqrt(double radicand, const char* what);

} // namespace pps
