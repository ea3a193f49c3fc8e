#pragma once

#include "pps/rng.hpp"
#include "pps/states.hpp"

namespace pps {

PureState random_pure(int dim, Rng& rng);

// GUE-style: (G + G')/2 with complex Gaussian entries.
Observable random_observable(int dim, Rng& rng);

// Ginibre-induced: G G' / Tr(G G').
DensityMatrix random_density(int dim, Rng& rng);

// Draws a density matrix with Tr(rho^2) <= max_purity: rejection first,
// otherwise an exact blend toward I/dim hitting the cap. max_purity must
// exceed 1/dim (the minimum achievable purity).
DensityMatrix random_density_capped(int dim, Rng& rng, double max_purity);

// Haar-distributed via QR of a Gaussian matrix with phase correction.
UnitaryOp random_unitary(int dim, Rng& rng);

// Redraws until |<phi|psi>| > min_overlap, keeping weak values defined.
PureState random_post_admissible(const PureState& psi, Rng& rng,
                                 double min_overlap = 1e-6);

} // namespace pps
