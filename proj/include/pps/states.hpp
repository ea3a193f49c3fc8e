#pragma once

#include <variant>
#include <vector>

#include "pps/linalg.hpp"

namespace pps {

// State/operator validation tolerances and the weak-value admissibility
// cutoff shared by every module.
inline constexpr double kStateNormTol = 1e-10;  // on |<v|v> - 1|
inline constexpr double kTraceOneTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-9;     // Frobenius norm of U'U - I
inline constexpr double kAdmissibleTol = 1e-8;

class PureState {
public:
    // Requires an already normalized amplitude vector.
    explicit PureState(CVector amplitudes);
    // Normalizes on the way in; zero vectors are rejected.
    static PureState normalized(CVector amplitudes);

    int dim() const { return static_cast<int>(amp_.size()); }
    const CVector& amplitudes() const { return amp_; }
    CMatrix projector() const { return amp_ * amp_.adjoint(); }

private:
    struct Trusted {};
    PureState(CVector amplitudes, Trusted) : amp_(std::move(amplitudes)) {}
    CVector amp_;
};

class DensityMatrix {
public:
    // Validates Hermiticity, positivity (eigenvalues >= -1e-10) and unit trace.
    explicit DensityMatrix(CMatrix rho);
    static DensityMatrix from_pure(const PureState& psi);

    int dim() const { return static_cast<int>(rho_.rows()); }
    const CMatrix& matrix() const { return rho_; }

private:
    CMatrix rho_;
};

class Observable {
public:
    explicit Observable(CMatrix mat); // Hermitian within 1e-10

    int dim() const { return static_cast<int>(mat_.rows()); }
    const CMatrix& matrix() const { return mat_; }
    const RVector& eigenvalues() const { return spectrum_.values; }
    const CMatrix& eigenvectors() const { return spectrum_.vectors; }

private:
    CMatrix mat_;
    EigResult spectrum_;
};

class UnitaryOp {
public:
    explicit UnitaryOp(CMatrix mat); // ||U'U - I||_F <= 1e-9

    int dim() const { return static_cast<int>(mat_.rows()); }
    const CMatrix& matrix() const { return mat_; }

private:
    CMatrix mat_;
};

// Pre-selection is either a pure state or a density matrix; the two code
// paths stay distinct because the mixed formulas are not rank-1 rewrites.
using Preselection = std::variant<PureState, DensityMatrix>;

struct PPSContext {
    Preselection pre;
    PureState post;
    Complex overlap;             // <phi|psi> (pure) or <phi|rho|phi> (mixed, real)
    bool weak_value_admissible;  // |overlap| > 1e-8 resp. overlap > 1e-8
};

PPSContext make_context(const PureState& pre, const PureState& post);
PPSContext make_context(const DensityMatrix& pre, const PureState& post);

// cos(theta/2)|0> + e^{i phase} sin(theta/2)|1>
PureState make_qubit_state(double theta, double phase);

// Sum p_i |psi_i><psi_i|; weights must be nonnegative and sum to 1.
DensityMatrix ensemble_to_density(const std::vector<double>& weights,
                                  const std::vector<PureState>& states);

double purity(const DensityMatrix& rho); // Tr(rho^2)

PureState tensor_product(const PureState& a, const PureState& b);
Observable tensor_product(const Observable& a, const Observable& b);
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);
UnitaryOp tensor_product(const UnitaryOp& a, const UnitaryOp& b);

// Partial inner product <phi_b|rho|phi_b> over the trailing factor.
// Unnormalized on purpose: its trace is the collapse probability.
CMatrix collapse_subsystem(const DensityMatrix& rho_ab, const PureState& phi_b);

} // namespace pps
