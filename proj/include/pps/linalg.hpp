#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

#include "pps/errors.hpp"

namespace pps {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Shared numerical tolerances. Structural checks (hermiticity, psd) sit at
// 1e-10, state normalization at 1e-9, phase/independence cutoffs at 1e-10.
inline constexpr double kHermTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kNormTol = 1e-9;
inline constexpr double kPhaseCutoff = 1e-10;
inline constexpr double kIndependenceTol = 1e-10;

void require_square(const CMatrix& m, const char* what);
void require_same_dim(const CMatrix& a, const CMatrix& b, const char* what);

CMatrix commutator(const CMatrix& a, const CMatrix& b);     // AB - BA
CMatrix anticommutator(const CMatrix& a, const CMatrix& b); // AB + BA

double frobenius_norm(const CMatrix& m);

bool is_hermitian(const CMatrix& m, double tol = kHermTol);
void require_hermitian(const CMatrix& m, const char* what, double tol = kHermTol);

struct EigResult {
    RVector values;  // ascending
    CMatrix vectors; // orthonormal columns, vectors.col(k) <-> values(k)
};

// Spectral decomposition of a Hermitian matrix. Each eigenvector is phase
// fixed so downstream output is reproducible.
EigResult eig_hermitian(const CMatrix& m);

bool is_psd(const CMatrix& m, double tol = kPsdTol);

// Hermitian square root. Eigenvalues in [-tol, 0) are treated as exact
// zeros; anything below -tol throws NotPsd.
CMatrix sqrt_psd(const CMatrix& m, double tol = kPsdTol);

// Multiply by a global phase so the first entry with modulus above
// kPhaseCutoff becomes real and positive. Near-zero vectors pass through.
CVector fix_global_phase(const CVector& v);

// Orthonormal basis of C^dim whose leading seeds.size() vectors are the
// in-order Gram-Schmidt orthonormalization of the seeds; the remaining
// slots are filled deterministically from rng_seed. Zero or linearly
// dependent seeds (residual <= kIndependenceTol) throw DegenerateInput.
std::vector<CVector> gram_schmidt_complete(const std::vector<CVector>& seeds,
                                           int dim, std::uint64_t rng_seed);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CVector kron(const CVector& a, const CVector& b);

} // namespace pps
