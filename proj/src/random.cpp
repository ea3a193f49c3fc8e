#include "pps/random.hpp"

#include <cmath>
#include <stdexcept>

namespace pps {

namespace {

CMatrix ginibre(int dim, Rng& rng) {
    CMatrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = rng.gaussian_complex();
    return g;
}

} // namespace

PureState random_pure(int dim, Rng& rng) {
    if (dim < 1) throw DimensionMismatch("random_pure: dim must be positive");
    CVector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = rng.gaussian_complex();
    return PureState::normalized(std::move(v));
}

Observable random_observable(int dim, Rng& rng) {
    const CMatrix g = ginibre(dim, rng);
    return Observable((g + g.adjoint()) / 2.0);
}

DensityMatrix random_density(int dim, Rng& rng) {
    const CMatrix g = ginibre(dim, rng);
    CMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(std::move(rho));
}

DensityMatrix random_density_capped(int dim, Rng& rng, double max_purity) {
    const double floor = 1.0 / dim;
    if (max_purity <= floor || max_purity > 1.0) {
        throw std::invalid_argument("random_density_capped: cap outside (1/dim, 1]");
    }
    DensityMatrix rho = random_density(dim, rng);
    const double p = purity(rho);
    if (p <= max_purity) return rho;
    // Purity of (1-t)rho + t I/d is (p - 1/d)(t-1)^2 + 1/d; solve for the cap.
    const double t = 1.0 - std::sqrt((max_purity - floor) / (p - floor));
    const CMatrix blended = (1.0 - t) * rho.matrix() +
                            (t / dim) * CMatrix::Identity(dim, dim);
    return DensityMatrix(blended);
}

UnitaryOp random_unitary(int dim, Rng& rng) {
    const CMatrix g = ginibre(dim, rng);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // absorb R's diagonal phases so the distribution is Haar, not QR-biased
    for (int k = 0; k < dim; ++k) {
        const double mag = std::abs(r(k, k));
        if (mag > 0.0) q.col(k) *= r(k, k) / mag;
    }
    return UnitaryOp(std::move(q));
}

PureState random_post_admissible(const PureState& psi, Rng& rng, double min_overlap) {
    for (;;) {
        PureState phi = random_pure(psi.dim(), rng);
        const Complex ov = phi.amplitudes().dot(psi.amplitudes());
        if (std::abs(ov) > min_overlap) return phi;
    }
}

} // namespace pps
