#include "pps/purity.hpp"

#include <cmath>
#include <stdexcept>

#include "pps/errors.hpp"
#include "pps/pps_stats.hpp"
#include "pps/random.hpp"

namespace pps {

namespace {

void require_dim(int got, int want, const char* what) {
    if (got != want) throw DimensionMismatch(std::string(what) + ": wrong dimension");
}

void require_threshold(double threshold, const char* what) {
    if (!(threshold >= 0.0))
        throw std::invalid_argument(std::string(what) + ": threshold must be nonnegative");
}

bool all_passed(const std::vector<PreconditionCheck>& checks) {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

Verdict verdict_from_gaps(const std::vector<double>& gaps, double threshold) {
    for (double g : gaps)
        if (g > threshold) return Verdict::Mixed;
    return Verdict::Pure;
}

double post_probability(const DensityMatrix& rho, const PureState& phi) {
    return phi.amplitudes().dot(rho.matrix() * phi.amplitudes()).real();
}

// Basis orthonormality to 1e-9 plus the vanishing cross element between the
// first two members; shared by the qutrit and 3x2 detectors.
void check_basis_conditions(const Observable& a, const std::vector<PureState>& basis,
                            PurityVerdict& v) {
    bool ortho = true;
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j)
            ortho = ortho &&
                    std::abs(basis[i].amplitudes().dot(basis[j].amplitudes())) <= kNormTol;
    v.precondition_report.push_back({"basis-orthonormal", ortho});
    const double cross =
        std::abs(basis[0].amplitudes().dot(a.matrix() * basis[1].amplitudes()));
    v.precondition_report.push_back({"cross-element-zero", cross <= kNormTol});
}

// Gap evaluation over every basis member with nonzero probability; returns
// false when no member is testable.
bool qutrit_gaps(const DensityMatrix& rho, const Observable& a,
                 const std::vector<PureState>& basis, PurityVerdict& v) {
    bool any = false;
    for (const PureState& phi : basis) {
        const double p = post_probability(rho, phi);
        v.collapse_probabilities.push_back(p);
        if (p > kAdmissibleTol) {
            v.gap_values.push_back(classical_uncertainty(rho, a, phi));
            any = true;
        }
    }
    v.precondition_report.push_back({"some-post-probability-positive", any});
    return any;
}

} // namespace

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Pure: return "pure";
        case Verdict::Mixed: return "mixed";
        default: return "indeterminate";
    }
}

PurityVerdict detect_qubit(const DensityMatrix& rho, const Observable& a,
                           const PureState& phi, double threshold) {
    require_dim(rho.dim(), 2, "detect_qubit");
    require_dim(a.dim(), 2, "detect_qubit");
    require_dim(phi.dim(), 2, "detect_qubit");
    require_threshold(threshold, "detect_qubit");

    PurityVerdict v;
    v.threshold = threshold;
    v.precondition_report.push_back({"post-not-eigenstate", std_standard(a, phi) > 1e-6});
    const double p = post_probability(rho, phi);
    v.collapse_probabilities.push_back(p);
    v.precondition_report.push_back({"post-probability-positive", p > kAdmissibleTol});
    if (!all_passed(v.precondition_report)) return v;

    v.gap_values.push_back(classical_uncertainty(rho, a, phi));
    v.verdict = verdict_from_gaps(v.gap_values, threshold);
    return v;
}

PurityVerdict detect_qutrit(const DensityMatrix& rho, const Observable& a,
                            const std::vector<PureState>& basis, double threshold) {
    require_dim(rho.dim(), 3, "detect_qutrit");
    require_dim(a.dim(), 3, "detect_qutrit");
    if (basis.size() != 3)
        throw DimensionMismatch("detect_qutrit: basis must hold exactly 3 states");
    for (const PureState& b : basis) require_dim(b.dim(), 3, "detect_qutrit");
    require_threshold(threshold, "detect_qutrit");

    PurityVerdict v;
    v.threshold = threshold;
    check_basis_conditions(a, basis, v);
    if (!all_passed(v.precondition_report)) return v;
    if (!qutrit_gaps(rho, a, basis, v)) return v;

    v.verdict = verdict_from_gaps(v.gap_values, threshold);
    return v;
}

PurityVerdict detect_qubit_qubit(const DensityMatrix& rho_ab, const Observable& a,
                                 const PureState& phi_a, const PureState& phi_b,
                                 const PureState& phi_b_prime, double threshold) {
    require_dim(rho_ab.dim(), 4, "detect_qubit_qubit");
    require_dim(a.dim(), 2, "detect_qubit_qubit");
    require_dim(phi_a.dim(), 2, "detect_qubit_qubit");
    require_dim(phi_b.dim(), 2, "detect_qubit_qubit");
    require_dim(phi_b_prime.dim(), 2, "detect_qubit_qubit");
    require_threshold(threshold, "detect_qubit_qubit");

    PurityVerdict v;
    v.threshold = threshold;
    v.precondition_report.push_back(
        {"postselections-nonorthogonal",
         std::abs(phi_b.amplitudes().dot(phi_b_prime.amplitudes())) > 1e-6});
    v.precondition_report.push_back({"post-not-eigenstate", std_standard(a, phi_a) > 1e-6});

    const CMatrix raw1 = collapse_subsystem(rho_ab, phi_b);
    const CMatrix raw2 = collapse_subsystem(rho_ab, phi_b_prime);
    const double p1 = raw1.trace().real();
    const double p2 = raw2.trace().real();
    v.collapse_probabilities = {p1, p2};
    v.precondition_report.push_back(
        {"collapse-probability-positive", p1 > kAdmissibleTol && p2 > kAdmissibleTol});
    if (!all_passed(v.precondition_report)) return v;

    const DensityMatrix rho1(raw1 / p1);
    const DensityMatrix rho2(raw2 / p2);
    const double q1 = post_probability(rho1, phi_a);
    const double q2 = post_probability(rho2, phi_a);
    v.precondition_report.push_back(
        {"post-probability-positive", q1 > kAdmissibleTol && q2 > kAdmissibleTol});
    if (!all_passed(v.precondition_report)) return v;

    v.gap_values.push_back(classical_uncertainty(rho1, a, phi_a));
    v.gap_values.push_back(classical_uncertainty(rho2, a, phi_a));
    v.verdict = verdict_from_gaps(v.gap_values, threshold);
    return v;
}

PurityVerdict detect_qubit_qutrit(const DensityMatrix& rho_ab, const Observable& a,
                                  const std::vector<PureState>& basis_a,
                                  const PureState& phi_b, const PureState& phi_b_prime,
                                  double threshold) {
    require_dim(rho_ab.dim(), 6, "detect_qubit_qutrit");
    require_dim(a.dim(), 3, "detect_qubit_qutrit");
    if (basis_a.size() != 3)
        throw DimensionMismatch("detect_qubit_qutrit: basis must hold exactly 3 states");
    for (const PureState& b : basis_a) require_dim(b.dim(), 3, "detect_qubit_qutrit");
    require_dim(phi_b.dim(), 2, "detect_qubit_qutrit");
    require_dim(phi_b_prime.dim(), 2, "detect_qubit_qutrit");
    require_threshold(threshold, "detect_qubit_qutrit");

    PurityVerdict v;
    v.threshold = threshold;
    check_basis_conditions(a, basis_a, v);
    v.precondition_report.push_back(
        {"postselections-nonorthogonal",
         std::abs(phi_b.amplitudes().dot(phi_b_prime.amplitudes())) > 1e-6});

    const CMatrix raw1 = collapse_subsystem(rho_ab, phi_b);
    const CMatrix raw2 = collapse_subsystem(rho_ab, phi_b_prime);
    const double p1 = raw1.trace().real();
    const double p2 = raw2.trace().real();
    v.collapse_probabilities = {p1, p2};
    v.precondition_report.push_back(
        {"collapse-probability-positive", p1 > kAdmissibleTol && p2 > kAdmissibleTol});
    if (!all_passed(v.precondition_report)) return v;

    bool testable = true;
    for (const CMatrix* raw : {&raw1, &raw2}) {
        const DensityMatrix collapsed(*raw / raw->trace().real());
        testable = qutrit_gaps(collapsed, a, basis_a, v) && testable;
    }
    if (!testable) return v;

    v.verdict = verdict_from_gaps(v.gap_values, threshold);
    return v;
}

PureState random_informative_post(const Observable& a, Rng& rng, double min_dev) {
    // The largest deviation any state can reach is half the spectral spread,
    // so cap the bar accordingly or near-degenerate observables starve the loop.
    const Eigen::SelfAdjointEigenSolver<CMatrix> es(a.matrix(), Eigen::EigenvaluesOnly);
    const double spread = es.eigenvalues().maxCoeff() - es.eigenvalues().minCoeff();
    if (spread <= 1e-12)
        throw DegenerateInput("random_informative_post: observable has no deviation anywhere");
    const double bar = std::min(min_dev, spread / 4.0);
    for (;;) {
        const PureState phi = random_pure(a.dim(), rng);
        if (std_standard(a, phi) > bar) return phi;
    }
}

std::vector<PureState> random_condition_basis(const Observable& a, Rng& rng) {
    const int d = a.dim();
    if (d < 3) throw DimensionMismatch("random_condition_basis: dimension must exceed 2");
    const CMatrix u = random_unitary(d, rng).matrix();

    // Rotate inside span{u_1, u_2} so the cross element <b_0|A|b_1> cancels.
    const Complex m1 = u.col(0).dot(a.matrix() * u.col(1));
    const Complex m2 = u.col(0).dot(a.matrix() * u.col(2));
    Complex alpha = -m2, beta = m1;
    const double n = std::sqrt(std::norm(alpha) + std::norm(beta));
    if (n <= 1e-12) {
        alpha = Complex(1.0, 0.0);
        beta = Complex(0.0, 0.0);
    } else {
        alpha /= n;
        beta /= n;
    }

    std::vector<PureState> basis;
    basis.push_back(PureState::normalized(u.col(0)));
    basis.push_back(PureState::normalized(alpha * u.col(1) + beta * u.col(2)));
    basis.push_back(PureState::normalized(-std::conj(beta) * u.col(1) +
                                          std::conj(alpha) * u.col(2)));
    for (int k = 3; k < d; ++k) basis.push_back(PureState::normalized(u.col(k)));
    return basis;
}

} // namespace pps
