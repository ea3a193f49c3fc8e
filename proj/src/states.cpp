#include "pps/states.hpp"

#include <cmath>
#include <utility>

namespace pps {

PureState::PureState(CVector amplitudes) : amp_(std::move(amplitudes)) {
    if (amp_.size() < 1) {
        throw DimensionMismatch("PureState: empty amplitude vector");
    }
    if (std::abs(amp_.squaredNorm() - 1.0) > kStateNormTol) {
        throw InvalidState("PureState: amplitudes are not unit norm");
    }
}

PureState PureState::normalized(CVector amplitudes) {
    const double norm = amplitudes.norm();
    if (norm <= kIndependenceTol) {
        throw DegenerateInput("PureState::normalized: zero vector");
    }
    return PureState(amplitudes / norm, Trusted{});
}

DensityMatrix::DensityMatrix(CMatrix rho) : rho_(std::move(rho)) {
    require_square(rho_, "DensityMatrix");
    if (!is_hermitian(rho_)) {
        throw NotHermitian("DensityMatrix: not Hermitian within tolerance");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kPsdTol) {
        throw NotPsd("DensityMatrix: negative eigenvalue beyond tolerance");
    }
    if (std::abs(rho_.trace().real() - 1.0) > kTraceOneTol ||
        std::abs(rho_.trace().imag()) > kTraceOneTol) {
        throw InvalidState("DensityMatrix: trace is not 1 within tolerance");
    }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
    return DensityMatrix(psi.projector());
}

Observable::Observable(CMatrix mat) : mat_(std::move(mat)) {
    require_hermitian(mat_, "Observable");
    spectrum_ = eig_hermitian(mat_);
}

UnitaryOp::UnitaryOp(CMatrix mat) : mat_(std::move(mat)) {
    require_square(mat_, "UnitaryOp");
    const CMatrix defect =
        mat_.adjoint() * mat_ - CMatrix::Identity(mat_.rows(), mat_.cols());
    if (defect.norm() > kUnitaryTol) {
        throw InvalidState("UnitaryOp: U'U differs from identity beyond tolerance");
    }
}

PPSContext make_context(const PureState& pre, const PureState& post) {
    if (pre.dim() != post.dim()) {
        throw DimensionMismatch("make_context: pre/post dimensions differ");
    }
    const Complex overlap = post.amplitudes().dot(pre.amplitudes());
    return PPSContext{pre, post, overlap, std::abs(overlap) > kAdmissibleTol};
}

PPSContext make_context(const DensityMatrix& pre, const PureState& post) {
    if (pre.dim() != post.dim()) {
        throw DimensionMismatch("make_context: pre/post dimensions differ");
    }
    const Complex q = post.amplitudes().dot(pre.matrix() * post.amplitudes());
    return PPSContext{pre, post, Complex{q.real(), 0.0}, q.real() > kAdmissibleTol};
}

PureState make_qubit_state(double theta, double phase) {
    CVector v(2);
    v << std::cos(theta / 2.0),
        std::polar(1.0, phase) * std::sin(theta / 2.0);
    return PureState::normalized(v);
}

DensityMatrix ensemble_to_density(const std::vector<double>& weights,
                                  const std::vector<PureState>& states) {
    if (weights.empty() || weights.size() != states.size()) {
        throw DimensionMismatch("ensemble_to_density: weights/states size mismatch");
    }
    const int dim = states.front().dim();
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw InvalidState("ensemble_to_density: negative weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-10) {
        throw InvalidState("ensemble_to_density: weights do not sum to 1");
    }
    CMatrix rho = CMatrix::Zero(dim, dim);
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i].dim() != dim) {
            throw DimensionMismatch("ensemble_to_density: mixed member dimensions");
        }
        rho += weights[i] * states[i].projector();
    }
    return DensityMatrix((rho + rho.adjoint()) / 2.0);
}

double purity(const DensityMatrix& rho) {
    return (rho.matrix() * rho.matrix()).trace().real();
}

PureState tensor_product(const PureState& a, const PureState& b) {
    return PureState::normalized(kron(a.amplitudes(), b.amplitudes()));
}

Observable tensor_product(const Observable& a, const Observable& b) {
    return Observable(kron(a.matrix(), b.matrix()));
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
    return DensityMatrix(kron(a.matrix(), b.matrix()));
}

UnitaryOp tensor_product(const UnitaryOp& a, const UnitaryOp& b) {
    return UnitaryOp(kron(a.matrix(), b.matrix()));
}

CMatrix collapse_subsystem(const DensityMatrix& rho_ab, const PureState& phi_b) {
    const int dim_b = phi_b.dim();
    const int dim_ab = rho_ab.dim();
    if (dim_ab % dim_b != 0) {
        throw DimensionMismatch("collapse_subsystem: dimensions do not factor");
    }
    const int dim_a = dim_ab / dim_b;
    const CVector& phi = phi_b.amplitudes();
    CMatrix out = CMatrix::Zero(dim_a, dim_a);
    for (int i = 0; i < dim_a; ++i) {
        for (int j = 0; j < dim_a; ++j) {
            Complex acc = 0.0;
            for (int k = 0; k < dim_b; ++k) {
                for (int l = 0; l < dim_b; ++l) {
                    acc += std::conj(phi(k)) * rho_ab.matrix()(i * dim_b + k, j * dim_b + l) *
                           phi(l);
                }
            }
            out(i, j) = acc;
        }
    }
    return out;
}

} // namespace pps
