#pragma once

#include <string>
#include <vector>

#include "pps/rng.hpp"
#include "pps/states.hpp"

namespace pps {

enum class Verdict { Pure, Mixed, Indeterminate };

const char* to_string(Verdict v);

struct PreconditionCheck {
    std::string name;
    bool passed;
};

// Outcome of one uncertainty-gap detection protocol. gap_values holds the
// classical-uncertainty gap per tested post-selection; Indeterminate always
// means a recorded precondition failed, never that a gap was large.
struct PurityVerdict {
    Verdict verdict = Verdict::Indeterminate;
    std::vector<double> gap_values;
    double threshold = 0.0;
    std::vector<PreconditionCheck> precondition_report;
    std::vector<double> collapse_probabilities; // post-selection success rates
};

inline constexpr double kPureThreshold = 1e-8;  // certify purity
inline constexpr double kMixedThreshold = 1e-6; // flag mixedness

// Qubit criterion: a single gap at one non-eigenstate post-selection decides
// purity. An eigenstate phi makes the gap vanish identically for every rho,
// so that case is refused as Indeterminate.
PurityVerdict detect_qubit(const DensityMatrix& rho, const Observable& a,
                           const PureState& phi, double threshold = kPureThreshold);

// Qutrit criterion: gaps over a full orthonormal basis whose first two
// members satisfy <phi_1|A|phi_2> = 0; only post-selections with nonzero
// probability are tested.
PurityVerdict detect_qutrit(const DensityMatrix& rho, const Observable& a,
                            const std::vector<PureState>& basis,
                            double threshold = kPureThreshold);

// 2x2 bipartite criterion: qubit detection of A on the normalized collapses
// onto two non-orthogonal post-selections of the second subsystem. Pure only
// when both gaps stay under the threshold.
PurityVerdict detect_qubit_qubit(const DensityMatrix& rho_ab, const Observable& a,
                                 const PureState& phi_a, const PureState& phi_b,
                                 const PureState& phi_b_prime,
                                 double threshold = kPureThreshold);

// 3x2 bipartite criterion: the qutrit test applied to both normalized
// collapses of the trailing qubit.
PurityVerdict detect_qubit_qutrit(const DensityMatrix& rho_ab, const Observable& a,
                                  const std::vector<PureState>& basis_a,
                                  const PureState& phi_b, const PureState& phi_b_prime,
                                  double threshold = kPureThreshold);

// Random post-selection kept away from the eigenstates of a (standard
// deviation above min_dev), so the qubit gap criterion stays conclusive.
PureState random_informative_post(const Observable& a, Rng& rng, double min_dev = 0.05);

// Random orthonormal basis of the space of a whose first two members satisfy
// the vanishing cross matrix element required by the qutrit criterion.
std::vector<PureState> random_condition_basis(const Observable& a, Rng& rng);

} // namespace pps
