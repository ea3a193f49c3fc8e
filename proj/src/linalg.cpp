#include "pps/linalg.hpp"

#include <cmath>
#include <string>

#include "pps/rng.hpp"

namespace pps {

void require_square(const CMatrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw DimensionMismatch(std::string(what) + ": matrix must be square and non-empty");
    }
}

void require_same_dim(const CMatrix& a, const CMatrix& b, const char* what) {
    require_square(a, what);
    require_square(b, what);
    if (a.rows() != b.rows()) {
        throw DimensionMismatch(std::string(what) + ": operand dimensions differ");
    }
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) {
    require_same_dim(a, b, "commutator");
    return a * b - b * a;
}

CMatrix anticommutator(const CMatrix& a, const CMatrix& b) {
    require_same_dim(a, b, "anticommutator");
    return a * b + b * a;
}

double frobenius_norm(const CMatrix& m) {
    return m.norm();
}

bool is_hermitian(const CMatrix& m, double tol) {
    if (m.rows() != m.cols() || m.rows() == 0) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

void require_hermitian(const CMatrix& m, const char* what, double tol) {
    require_square(m, what);
    if (!is_hermitian(m, tol)) {
        throw NotHermitian(std::string(what) + ": matrix is not Hermitian within tolerance");
    }
}

EigResult eig_hermitian(const CMatrix& m) {
    require_hermitian(m, "eig_hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
    if (solver.info() != Eigen::Success) {
        throw NumericalInconsistency("eig_hermitian: eigensolver failed to converge");
    }
    EigResult out;
    out.values = solver.eigenvalues(); // ascending by construction
    out.vectors = solver.eigenvectors();
    for (int k = 0; k < out.vectors.cols(); ++k) {
        out.vectors.col(k) = fix_global_phase(out.vectors.col(k));
    }
    return out;
}

bool is_psd(const CMatrix& m, double tol) {
    if (!is_hermitian(m, tol)) return false;
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff() >= -tol;
}

CMatrix sqrt_psd(const CMatrix& m, double tol) {
    require_hermitian(m, "sqrt_psd");
    const EigResult eig = eig_hermitian(m);
    if (eig.values.minCoeff() < -tol) {
        throw NotPsd("sqrt_psd: matrix has a negative eigenvalue beyond tolerance");
    }
    RVector roots(eig.values.size());
    for (int k = 0; k < eig.values.size(); ++k) {
        roots(k) = eig.values(k) > 0.0 ? std::sqrt(eig.values(k)) : 0.0;
    }
    CMatrix s = eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
    return (s + s.adjoint()) / 2.0; // kill roundoff skew, keep it exactly Hermitian
}

CVector fix_global_phase(const CVector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v(i));
        if (mag > kPhaseCutoff) {
            return v * (std::conj(v(i)) / mag);
        }
    }
    return v;
}

namespace {

// Subtract projections onto the accepted vectors; run twice for stability.
CVector orthogonalize(const CVector& v, const std::vector<CVector>& basis) {
    CVector u = v;
    for (int pass = 0; pass < 2; ++pass) {
        for (const CVector& b : basis) {
            u -= b.dot(u) * b;
        }
    }
    return u;
}

} // namespace

std::vector<CVector> gram_schmidt_complete(const std::vector<CVector>& seeds,
                                           int dim, std::uint64_t rng_seed) {
    if (dim < 1) {
        throw DimensionMismatch("gram_schmidt_complete: dim must be positive");
    }
    if (static_cast<int>(seeds.size()) > dim) {
        throw DimensionMismatch("gram_schmidt_complete: more seeds than dimensions");
    }
    std::vector<CVector> basis;
    basis.reserve(dim);
    for (const CVector& seed : seeds) {
        if (seed.size() != dim) {
            throw DimensionMismatch("gram_schmidt_complete: seed has wrong dimension");
        }
        const double norm = seed.norm();
        if (norm <= kIndependenceTol) {
            throw DegenerateInput("gram_schmidt_complete: zero seed vector");
        }
        CVector u = orthogonalize(seed / norm, basis);
        if (u.norm() <= kIndependenceTol) {
            throw DegenerateInput("gram_schmidt_complete: linearly dependent seeds");
        }
        basis.push_back(u / u.norm());
    }
    Rng rng(rng_seed);
    while (static_cast<int>(basis.size()) < dim) {
        CVector draw(dim);
        for (int i = 0; i < dim; ++i) draw(i) = rng.gaussian_complex();
        CVector u = orthogonalize(draw, basis);
        if (u.norm() <= 1e-6) continue; // unlucky draw, essentially in the span
        basis.push_back(fix_global_phase(u / u.norm()));
    }
    return basis;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

CVector kron(const CVector& a, const CVector& b) {
    CVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

} // namespace pps
