#include "pps/pps_stats.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pps/linalg.hpp"

namespace pps {

namespace {

void require_dims(const Observable& a, const PureState& x, const char* what) {
    if (a.dim() != x.dim()) {
        throw DimensionMismatch(std::string(what) + ": operator/state dimensions differ");
    }
}

Complex bra_op_ket(const PureState& bra, const Observable& a, const PureState& ket) {
    return bra.amplitudes().dot(a.matrix() * ket.amplitudes());
}

double second_moment(const Observable& a, const PureState& psi) {
    return (a.matrix() * psi.amplitudes()).squaredNorm();
}

} // namespace

double clamped_sqrt(double radicand, const char* what) {
    if (radicand < -1e-12) {
        throw NumericalInconsistency(std::string(what) +
                                     ": radicand below the clamp window");
    }
    return radicand > 0.0 ? std::sqrt(radicand) : 0.0;
}

Complex weak_value(const Observable& a, const PureState& pre, const PureState& post) {
    require_dims(a, pre, "weak_value");
    require_dims(a, post, "weak_value");
    const Complex overlap = post.amplitudes().dot(pre.amplitudes());
    if (std::abs(overlap) <= kAdmissibleTol) {
        throw WeakValueUndefined("weak_value: orthogonal pre/post selection");
    }
    return bra_op_ket(post, a, pre) / overlap;
}

Complex weak_value_mixed(const Observable& a, const DensityMatrix& rho,
                         const PureState& post) {
    require_dims(a, post, "weak_value_mixed");
    if (a.dim() != rho.dim()) {
        throw DimensionMismatch("weak_value_mixed: operator/state dimensions differ");
    }
    const CVector phi = post.amplitudes();
    const double prob = phi.dot(rho.matrix() * phi).real();
    if (prob <= kAdmissibleTol) {
        throw WeakValueUndefined("weak_value_mixed: vanishing post-selection probability");
    }
    return phi.dot(a.matrix() * rho.matrix() * phi) / prob;
}

// Deviations are evaluated as the norm of A|psi> minus its projection onto
// the reference state. This equals sqrt(<A^2> - |mean|^2) exactly but stays
// accurate near zero, where the difference-of-squares form loses half the
// significant digits to cancellation.
double std_standard(const Observable& a, const PureState& psi) {
    require_dims(a, psi, "std_standard");
    const CVector v = a.matrix() * psi.amplitudes();
    const double mean = psi.amplitudes().dot(v).real();
    const CVector residual = v - mean * psi.amplitudes();
    return clamped_sqrt(residual.squaredNorm(), "std_standard");
}

AVDecomposition av_decompose(const Observable& a, const PureState& psi) {
    require_dims(a, psi, "av_decompose");
    const double mean = bra_op_ket(psi, a, psi).real();
    const double dev = std_standard(a, psi);
    if (dev <= 1e-10) {
        throw ResidualUndefined("av_decompose: eigenstate input, no residual direction");
    }
    const CVector residual = (a.matrix() * psi.amplitudes() - mean * psi.amplitudes()) / dev;
    return AVDecomposition{Complex{mean, 0.0}, dev, PureState::normalized(residual)};
}

double std_pps(const Observable& a, const PureState& pre, const PureState& post) {
    require_dims(a, pre, "std_pps");
    require_dims(a, post, "std_pps");
    const CVector v = a.matrix() * pre.amplitudes();
    const Complex mean = post.amplitudes().dot(v);
    const CVector residual = v - mean * post.amplitudes();
    return clamped_sqrt(residual.squaredNorm(), "std_pps");
}

AVDecomposition pps_decompose(const Observable& a, const PureState& pre,
                              const PureState& post) {
    const Complex mean = bra_op_ket(post, a, pre);
    const double dev = std_pps(a, pre, post);
    if (dev <= 1e-10) {
        throw ResidualUndefined("pps_decompose: zero deviation, no residual direction");
    }
    const CVector residual =
        (a.matrix() * pre.amplitudes() - mean * post.amplitudes()) / dev;
    return AVDecomposition{mean, dev, PureState::normalized(residual)};
}

double std_pps_infotheoretic(const Observable& a, const PureState& pre,
                             const PureState& post, std::uint64_t rng_seed) {
    require_dims(a, pre, "std_pps_infotheoretic");
    require_dims(a, post, "std_pps_infotheoretic");
    const auto basis =
        gram_schmidt_complete({post.amplitudes()}, post.dim(), rng_seed);
    const CVector a_psi = a.matrix() * pre.amplitudes();
    double sum = 0.0;
    for (std::size_t i = 1; i < basis.size(); ++i) {
        sum += std::norm(basis[i].dot(a_psi));
    }
    return std::sqrt(sum);
}

PureState zero_uncertainty_postselection(const Observable& a, const PureState& psi) {
    require_dims(a, psi, "zero_uncertainty_postselection");
    const CVector a_psi = a.matrix() * psi.amplitudes();
    if (a_psi.norm() <= 1e-10) {
        throw DegenerateInput(
            "zero_uncertainty_postselection: A|psi> vanishes, no zero-uncertainty post-selection");
    }
    return PureState::normalized(fix_global_phase(a_psi));
}

std::pair<PureState, double> max_uncertainty_postselection(const Observable& a,
                                                           const PureState& psi,
                                                           std::uint64_t rng_seed) {
    require_dims(a, psi, "max_uncertainty_postselection");
    if (psi.dim() < 2) {
        throw DimensionMismatch("max_uncertainty_postselection: dim must be >= 2");
    }
    const CVector a_psi = a.matrix() * psi.amplitudes();
    const double value = a_psi.norm();
    if (value <= 1e-10) {
        // every post-selection already attains the (zero) maximum
        const auto basis = gram_schmidt_complete({}, psi.dim(), rng_seed);
        return {PureState::normalized(basis.front()), 0.0};
    }
    const auto basis = gram_schmidt_complete({a_psi}, psi.dim(), rng_seed);
    return {PureState::normalized(basis[1]), value};
}

MetrologyReport metrology_report(const Observable& a, const PureState& psi,
                                 const PureState& phi, double sigma_pointer) {
    require_dims(a, psi, "metrology_report");
    require_dims(a, phi, "metrology_report");
    if (sigma_pointer <= 0.0) {
        throw std::invalid_argument("metrology_report: sigma_pointer must be positive");
    }
    const double four_sigma_sq = 4.0 * sigma_pointer * sigma_pointer;
    const double m2 = second_moment(a, psi);
    MetrologyReport out;
    out.fisher_phi = four_sigma_sq * std::norm(bra_op_ket(phi, a, psi));
    out.fisher_max = four_sigma_sq * m2;

    // internal consistency: the deviation route must price the same information
    const double dev = std_pps(a, psi, phi);
    if (std::abs(out.fisher_phi - four_sigma_sq * (m2 - dev * dev)) > 1e-9) {
        throw NumericalInconsistency("metrology_report: Fisher/deviation mismatch");
    }

    const CVector a_psi = a.matrix() * psi.amplitudes();
    if (a_psi.norm() > 1e-10) {
        const PureState phi_z = zero_uncertainty_postselection(a, psi);
        const Complex z_overlap = phi_z.amplitudes().dot(psi.amplitudes());
        out.p_z = std::norm(z_overlap);
        if (std::abs(z_overlap) > kAdmissibleTol) {
            out.weak_value_at_phi_z = weak_value(a, psi, phi_z);
        }
    }
    return out;
}

double std_pps_mixed(const Observable& a, const DensityMatrix& rho,
                     const PureState& phi) {
    if (a.dim() != rho.dim() || a.dim() != phi.dim()) {
        throw DimensionMismatch("std_pps_mixed: dimensions differ");
    }
    const CMatrix& m = a.matrix();
    const double tr_a2 = (m * m * rho.matrix()).trace().real();
    const CVector a_phi = m * phi.amplitudes();
    const double weak_term = a_phi.dot(rho.matrix() * a_phi).real();
    return clamped_sqrt(tr_a2 - weak_term, "std_pps_mixed");
}

double std_pps_mixed_weak(const Observable& a, const DensityMatrix& rho,
                          const PureState& phi) {
    if (a.dim() != rho.dim() || a.dim() != phi.dim()) {
        throw DimensionMismatch("std_pps_mixed_weak: dimensions differ");
    }
    const double prob = phi.amplitudes().dot(rho.matrix() * phi.amplitudes()).real();
    if (prob <= kAdmissibleTol) {
        throw WeakValueUndefined("std_pps_mixed_weak: vanishing post-selection probability");
    }
    const Complex wv = weak_value_mixed(a, rho, phi);
    const double tr_a2 = (a.matrix() * a.matrix() * rho.matrix()).trace().real();
    return clamped_sqrt(tr_a2 - std::norm(wv) * prob, "std_pps_mixed_weak");
}

double classical_uncertainty(const DensityMatrix& rho, const Observable& a,
                             const PureState& phi) {
    if (a.dim() != rho.dim() || a.dim() != phi.dim()) {
        throw DimensionMismatch("classical_uncertainty: dimensions differ");
    }
    const CVector phi_v = phi.amplitudes();
    const double prob = phi_v.dot(rho.matrix() * phi_v).real();
    if (prob <= kAdmissibleTol) {
        throw WeakValueUndefined("classical_uncertainty: vanishing post-selection probability");
    }
    const CVector a_phi = a.matrix() * phi_v;
    const double strong = a_phi.dot(rho.matrix() * a_phi).real();
    const double weak = std::norm(phi_v.dot(a.matrix() * rho.matrix() * phi_v)) / prob;
    const double gap = strong - weak;
    if (gap < -1e-10) {
        throw NumericalInconsistency("classical_uncertainty: negative gap beyond tolerance");
    }
    return gap;
}

} // namespace pps
