#include "pps/relations.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pps/errors.hpp"
#include "pps/pps_stats.hpp"

namespace pps {

namespace test_hooks {
std::atomic<bool> negate_weak_term{false};
}

namespace {

void require_pair(int da, int db, const char* what) {
    if (da != db) throw DimensionMismatch(std::string(what) + ": dimension mismatch");
}

double mean_of(const Observable& a, const PureState& psi) {
    return psi.amplitudes().dot(a.matrix() * psi.amplitudes()).real();
}

double variance_mixed(const Observable& a, const DensityMatrix& rho) {
    const double m2 = (a.matrix() * a.matrix() * rho.matrix()).trace().real();
    const double m1 = (a.matrix() * rho.matrix()).trace().real();
    return m2 - m1 * m1;
}

// W_AB = <psi|A|phi><phi|B|psi>. The test hook flips its imaginary part so
// the verification sweep can prove it would catch a sign bug here.
Complex weak_cross_term(const Observable& a, const Observable& b,
                        const PureState& pre, const PureState& post) {
    const Complex w = pre.amplitudes().dot(a.matrix() * post.amplitudes()) *
                      post.amplitudes().dot(b.matrix() * pre.amplitudes());
    if (test_hooks::negate_weak_term.load()) return {w.real(), -w.imag()};
    return w;
}

double commutator_mean_imag(const Observable& a, const Observable& b, const PureState& psi) {
    return psi.amplitudes().dot(commutator(a.matrix(), b.matrix()) * psi.amplitudes()).imag();
}

double anticommutator_mean(const Observable& a, const Observable& b, const PureState& psi) {
    return psi.amplitudes().dot(anticommutator(a.matrix(), b.matrix()) * psi.amplitudes()).real();
}

void finalize_lower_bound(BoundReport& r, double saturation_tol) {
    r.gap = r.lhs - r.rhs_total;
    r.saturated = r.gap <= saturation_tol;
}

void finalize_upper_bound(BoundReport& r, double saturation_tol) {
    r.gap = r.rhs_total - r.lhs;
    r.saturated = r.gap <= saturation_tol;
}

// rhs of the post-selected product bound given the cross term and the
// commutator/anticommutator means; shared by the pure and mixed variants.
void product_bound_rhs(BoundReport& r, double comm_imag, double anti_mean,
                       const Complex& w, bool include_schrodinger) {
    const double n = comm_imag / 2.0 - w.imag();
    r.rhs_terms.emplace_back("commutator-term", n * n);
    r.rhs_total = n * n;
    if (include_schrodinger) {
        const double s = anti_mean / 2.0 - w.real();
        r.rhs_terms.emplace_back("schrodinger-term", s * s);
        r.rhs_total += s * s;
    }
    r.w_ab = w;
}

} // namespace

BoundReport rhur(const Observable& a, const Observable& b, const PureState& psi,
                 bool include_schrodinger, double saturation_tol) {
    require_pair(a.dim(), b.dim(), "rhur");
    require_pair(a.dim(), psi.dim(), "rhur");
    BoundReport r;
    const double da = std_standard(a, psi);
    const double db = std_standard(b, psi);
    r.lhs = da * da * db * db;
    const double c = commutator_mean_imag(a, b, psi) / 2.0;
    r.rhs_terms.emplace_back("commutator-term", c * c);
    r.rhs_total = c * c;
    if (include_schrodinger) {
        const double s = anticommutator_mean(a, b, psi) / 2.0 - mean_of(a, psi) * mean_of(b, psi);
        r.rhs_terms.emplace_back("schrodinger-term", s * s);
        r.rhs_total += s * s;
    }
    finalize_lower_bound(r, saturation_tol);
    return r;
}

BoundReport pps_ur(const Observable& a, const Observable& b, const PureState& pre,
                   const PureState& post, bool include_schrodinger, double saturation_tol) {
    require_pair(a.dim(), b.dim(), "pps_ur");
    require_pair(a.dim(), pre.dim(), "pps_ur");
    require_pair(a.dim(), post.dim(), "pps_ur");
    BoundReport r;
    const double da = std_pps(a, pre, post);
    const double db = std_pps(b, pre, post);
    r.lhs = da * da * db * db;
    product_bound_rhs(r, commutator_mean_imag(a, b, pre), anticommutator_mean(a, b, pre),
                      weak_cross_term(a, b, pre, post), include_schrodinger);
    finalize_lower_bound(r, saturation_tol);
    return r;
}

std::optional<PureState> common_zero_postselection(const Observable& a, const Observable& b,
                                                   const PureState& psi) {
    require_pair(a.dim(), b.dim(), "common_zero_postselection");
    require_pair(a.dim(), psi.dim(), "common_zero_postselection");
    const CVector u = a.matrix() * psi.amplitudes();
    const CVector v = b.matrix() * psi.amplitudes();
    if (u.norm() <= 1e-10 || v.norm() <= 1e-10)
        throw DegenerateInput("common_zero_postselection: an observable annihilates psi");
    const CVector un = u / u.norm();
    const CVector vn = v / v.norm();
    // Parallel up to global phase exactly when the overlap modulus is 1.
    if (std::abs(un.dot(vn)) <= 1.0 - kNormTol) return std::nullopt;
    return PureState::normalized(fix_global_phase(un));
}

double intelligent_residual(const Observable& a, const Observable& b,
                            const PureState& pre, const PureState& post, int sign) {
    require_pair(a.dim(), b.dim(), "intelligent_residual");
    require_pair(a.dim(), pre.dim(), "intelligent_residual");
    require_pair(a.dim(), post.dim(), "intelligent_residual");
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("intelligent_residual: sign must be +1 or -1");
    const double da = std_pps(a, pre, post);
    const double db = std_pps(b, pre, post);
    if (da <= 1e-10 || db <= 1e-10)
        throw ResidualUndefined("intelligent_residual: a post-selected deviation vanishes");
    const CVector ra = a.matrix() * pre.amplitudes() -
                       post.amplitudes().dot(a.matrix() * pre.amplitudes()) * post.amplitudes();
    const CVector rb = b.matrix() * pre.amplitudes() -
                       post.amplitudes().dot(b.matrix() * pre.amplitudes()) * post.amplitudes();
    return (ra - Complex(0.0, static_cast<double>(sign)) * (da / db) * rb).norm();
}

EqualityReport equality_product(const Observable& a, const Observable& b,
                                const PureState& pre, const PureState& post,
                                std::uint64_t rng_seed) {
    require_pair(a.dim(), b.dim(), "equality_product");
    require_pair(a.dim(), pre.dim(), "equality_product");
    require_pair(a.dim(), post.dim(), "equality_product");
    const double da = std_pps(a, pre, post);
    const double db = std_pps(b, pre, post);
    if (da <= kAdmissibleTol || db <= kAdmissibleTol)
        throw DegenerateInput("equality_product: a post-selected deviation vanishes");

    const Complex w = weak_cross_term(a, b, pre, post);
    const double n = commutator_mean_imag(a, b, pre) / 2.0 - w.imag();
    // Branch with nonnegative numerator: numerator = -sign * n = |n|.
    const int sign = (n > 0.0) ? -1 : +1;
    const double numerator = -static_cast<double>(sign) * n;

    const CMatrix d = a.matrix() / da +
                      Complex(0.0, static_cast<double>(sign)) * b.matrix() / db;
    const auto basis = gram_schmidt_complete({post.amplitudes()}, a.dim(), rng_seed);
    const CVector left = d.adjoint() * pre.amplitudes(); // <psi|D|x> = (D'psi)'x
    double sum = 0.0;
    for (std::size_t k = 1; k < basis.size(); ++k) sum += std::norm(left.dot(basis[k]));
    const double denominator = 1.0 - sum / 2.0;
    if (std::abs(denominator) <= 1e-10)
        throw EqualityIndeterminate("equality_product: vanishing denominator");

    EqualityReport rep;
    rep.lhs = da * db;
    rep.rhs = numerator / denominator;
    rep.residual = rep.lhs - rep.rhs;
    rep.sign_chosen = sign;
    return rep;
}

EqualityReport equality_sum(const Observable& a, const Observable& b,
                            const PureState& pre, const PureState& post,
                            std::uint64_t rng_seed) {
    require_pair(a.dim(), b.dim(), "equality_sum");
    require_pair(a.dim(), pre.dim(), "equality_sum");
    require_pair(a.dim(), post.dim(), "equality_sum");
    const double da = std_pps(a, pre, post);
    const double db = std_pps(b, pre, post);

    const Complex w = weak_cross_term(a, b, pre, post);
    const double n = commutator_mean_imag(a, b, pre) / 2.0 - w.imag();
    const int sign = (n >= 0.0) ? +1 : -1; // keeps the leading term 2*sign*n >= 0

    const CMatrix d = a.matrix() + Complex(0.0, static_cast<double>(sign)) * b.matrix();
    const auto basis = gram_schmidt_complete({post.amplitudes()}, a.dim(), rng_seed);
    const CVector v = d * pre.amplitudes();
    double sum = 0.0;
    for (std::size_t k = 1; k < basis.size(); ++k) sum += std::norm(basis[k].dot(v));

    EqualityReport rep;
    rep.lhs = da * da + db * db;
    rep.rhs = 2.0 * static_cast<double>(sign) * n + sum;
    rep.residual = rep.lhs - rep.rhs;
    rep.sign_chosen = sign;
    return rep;
}

BoundReport pps_ur_mixed(const Observable& a, const Observable& b,
                         const DensityMatrix& rho, const PureState& post,
                         bool include_schrodinger, double saturation_tol) {
    require_pair(a.dim(), b.dim(), "pps_ur_mixed");
    require_pair(a.dim(), rho.dim(), "pps_ur_mixed");
    require_pair(a.dim(), post.dim(), "pps_ur_mixed");
    BoundReport r;
    const double da = std_pps_mixed(a, rho, post);
    const double db = std_pps_mixed(b, rho, post);
    r.lhs = da * da * db * db;
    const Complex w = post.amplitudes().dot(b.matrix() * rho.matrix() * a.matrix() *
                                            post.amplitudes());
    const double comm_imag = (commutator(a.matrix(), b.matrix()) * rho.matrix()).trace().imag();
    const double anti_mean = (anticommutator(a.matrix(), b.matrix()) * rho.matrix()).trace().real();
    product_bound_rhs(r, comm_imag, anti_mean, w, include_schrodinger);
    finalize_lower_bound(r, saturation_tol);
    return r;
}

BoundReport stronger_ur(const Observable& a, const Observable& b,
                        const PureState& psi, const PureState& phi,
                        bool include_schrodinger, double saturation_tol) {
    require_pair(a.dim(), b.dim(), "stronger_ur");
    require_pair(a.dim(), psi.dim(), "stronger_ur");
    require_pair(a.dim(), phi.dim(), "stronger_ur");
    BoundReport r;
    // Var(X) + eps_X telescopes to the post-selected variance, so the lhs is
    // evaluated in that stable form while eps_X is reported separately.
    const double da = std_pps(a, psi, phi);
    const double db = std_pps(b, psi, phi);
    r.lhs = da * da * db * db;
    const double ma = mean_of(a, psi);
    const double mb = mean_of(b, psi);
    r.eps_a = ma * ma - std::norm(phi.amplitudes().dot(a.matrix() * psi.amplitudes()));
    r.eps_b = mb * mb - std::norm(phi.amplitudes().dot(b.matrix() * psi.amplitudes()));
    product_bound_rhs(r, commutator_mean_imag(a, b, psi), anticommutator_mean(a, b, psi),
                      weak_cross_term(a, b, psi, phi), include_schrodinger);
    finalize_lower_bound(r, saturation_tol);
    return r;
}

BoundReport combined_stronger(const Observable& a, const Observable& b,
                              const PureState& psi, const PureState& phi,
                              double saturation_tol) {
    const BoundReport standard = rhur(a, b, psi, false, saturation_tol);
    const BoundReport stronger = stronger_ur(a, b, psi, phi, false, saturation_tol);
    BoundReport r;
    // max on both sides stays sound because each pair satisfies lhs >= rhs.
    r.lhs = std::max(standard.lhs, stronger.lhs);
    r.rhs_terms.emplace_back("standard-bound", standard.rhs_total);
    r.rhs_terms.emplace_back("postselected-bound", stronger.rhs_total);
    r.rhs_total = std::max(standard.rhs_total, stronger.rhs_total);
    finalize_lower_bound(r, saturation_tol);
    return r;
}

BoundReport mpur_bounds(const Observable& a, const Observable& b,
                        const PureState& psi, const PureState& psi_perp,
                        double saturation_tol) {
    require_pair(a.dim(), b.dim(), "mpur_bounds");
    require_pair(a.dim(), psi.dim(), "mpur_bounds");
    require_pair(a.dim(), psi_perp.dim(), "mpur_bounds");
    if (std::abs(psi_perp.amplitudes().dot(psi.amplitudes())) > kNormTol)
        throw InvalidState("mpur_bounds: psi_perp is not orthogonal to psi");

    BoundReport r;
    const double da = std_standard(a, psi);
    const double db = std_standard(b, psi);
    r.lhs = da * da + db * db;

    const double y = commutator_mean_imag(a, b, psi); // <[A,B]> = i*y
    double bound1 = 0.0;
    for (const int s : {+1, -1}) {
        const Complex amp = psi.amplitudes().dot(
            (a.matrix() + Complex(0.0, static_cast<double>(s)) * b.matrix()) *
            psi_perp.amplitudes());
        bound1 = std::max(bound1, -static_cast<double>(s) * y + std::norm(amp));
    }
    r.rhs_terms.emplace_back("orthogonal-state-bound", bound1);

    const Observable sum_obs(a.matrix() + b.matrix());
    const double dsum = std_standard(sum_obs, psi);
    if (dsum <= 1e-10)
        throw DegenerateInput("mpur_bounds: A+B has zero deviation on psi");
    const double bound2 = dsum * dsum / 2.0;
    r.rhs_terms.emplace_back("half-sum-variance-bound", bound2);

    r.rhs_total = std::max(bound1, bound2);
    finalize_lower_bound(r, saturation_tol);
    return r;
}

BoundReport tighter_sum_ur(const Observable& a, const Observable& b,
                           const DensityMatrix& rho, const PureState& phi,
                           std::optional<int> sign, double saturation_tol) {
    require_pair(a.dim(), b.dim(), "tighter_sum_ur");
    require_pair(a.dim(), rho.dim(), "tighter_sum_ur");
    require_pair(a.dim(), phi.dim(), "tighter_sum_ur");
    const Complex t = (commutator(a.matrix(), b.matrix()) * rho.matrix()).trace();
    int s;
    if (sign) {
        s = *sign;
        if (s != 1 && s != -1)
            throw std::invalid_argument("tighter_sum_ur: sign must be +1 or -1");
        if (-static_cast<double>(s) * t.imag() < -1e-12)
            throw std::invalid_argument("tighter_sum_ur: sign makes the commutator term negative");
    } else {
        s = (t.imag() <= 0.0) ? +1 : -1;
    }
    const double first = -static_cast<double>(s) * t.imag(); // s*i*Tr([A,B]rho)

    const Complex shift = ((a.matrix() + Complex(0.0, static_cast<double>(s)) * b.matrix()) *
                           rho.matrix()).trace();
    CMatrix c = a.matrix() + Complex(0.0, static_cast<double>(s)) * b.matrix();
    c.diagonal().array() -= shift;
    const CVector cphi = c * phi.amplitudes();
    const double second = cphi.dot(rho.matrix() * cphi).real();

    BoundReport r;
    r.lhs = variance_mixed(a, rho) + variance_mixed(b, rho);
    r.rhs_terms.emplace_back("commutator-term", first);
    r.rhs_terms.emplace_back("postselection-term", second);
    r.rhs_total = first + second;
    finalize_lower_bound(r, saturation_tol);
    return r;
}

PureState tight_saturating_postselection(const Observable& a, const Observable& b,
                                         const PureState& psi, int sign) {
    require_pair(a.dim(), b.dim(), "tight_saturating_postselection");
    require_pair(a.dim(), psi.dim(), "tight_saturating_postselection");
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("tight_saturating_postselection: sign must be +1 or -1");
    const CMatrix d = a.matrix() + Complex(0.0, static_cast<double>(sign)) * b.matrix();
    const Complex shift = psi.amplitudes().dot(d * psi.amplitudes());
    const CVector v = d * psi.amplitudes() - shift * psi.amplitudes();
    if (v.norm() <= 1e-10)
        throw DegenerateInput("tight_saturating_postselection: centered ladder vector vanishes");
    return PureState::normalized(fix_global_phase(v));
}

BoundReport unitary_pps_ur(const UnitaryOp& u, const UnitaryOp& v,
                           const DensityMatrix& rho, const PureState& phi,
                           double saturation_tol) {
    require_pair(u.dim(), v.dim(), "unitary_pps_ur");
    require_pair(u.dim(), rho.dim(), "unitary_pps_ur");
    require_pair(u.dim(), phi.dim(), "unitary_pps_ur");
    const CVector uphi = u.matrix() * phi.amplitudes();
    const CVector vphi = v.matrix() * phi.amplitudes();
    const double du = clamped_sqrt(1.0 - uphi.dot(rho.matrix() * uphi).real(), "unitary_pps_ur");
    const double dv = clamped_sqrt(1.0 - vphi.dot(rho.matrix() * vphi).real(), "unitary_pps_ur");
    const Complex cross = (v.matrix() * u.matrix().adjoint() * rho.matrix()).trace() -
                          uphi.dot(rho.matrix() * vphi);
    BoundReport r;
    r.lhs = du * dv;
    r.rhs_terms.emplace_back("cross-term", std::abs(cross));
    r.rhs_total = std::abs(cross);
    r.w_ab = cross;
    finalize_lower_bound(r, saturation_tol);
    return r;
}

Complex otoc_value(const UnitaryOp& v, const UnitaryOp& w_t, const DensityMatrix& rho) {
    require_pair(v.dim(), w_t.dim(), "otoc_value");
    require_pair(v.dim(), rho.dim(), "otoc_value");
    const CMatrix& vm = v.matrix();
    const CMatrix& wm = w_t.matrix();
    const Complex f = (wm.adjoint() * vm.adjoint() * wm * vm * rho.matrix()).trace();
    if (std::abs(f) > 1.0 + kGapTol)
        throw NumericalInconsistency("otoc_value: |F| exceeds 1");
    const CMatrix comm = commutator(wm, vm);
    const double norm_sq = (comm.adjoint() * comm * rho.matrix()).trace().real();
    if (std::abs(2.0 * (1.0 - f.real()) - norm_sq) > kGapTol)
        throw NumericalInconsistency("otoc_value: commutator-norm identity violated");
    return f;
}

BoundReport otoc_bounds(const UnitaryOp& v, const UnitaryOp& w_t,
                        const DensityMatrix& rho, const std::vector<PureState>& phis,
                        double saturation_tol) {
    require_pair(v.dim(), w_t.dim(), "otoc_bounds");
    require_pair(v.dim(), rho.dim(), "otoc_bounds");
    const auto clamped_angle = [](double c) { return std::acos(std::clamp(c, 0.0, 1.0)); };

    BoundReport r;
    r.lhs = std::abs(otoc_value(v, w_t, rho));

    const CMatrix vw = v.matrix() * w_t.matrix();
    const CMatrix wv = w_t.matrix() * v.matrix();
    const double theta_vw = clamped_angle(std::abs((rho.matrix() * vw).trace()));
    const double theta_wv = clamped_angle(std::abs((rho.matrix() * wv).trace()));
    const double bong = std::cos(theta_vw - theta_wv);
    r.rhs_terms.emplace_back("bong-bound", bong);
    r.rhs_total = bong;

    const CMatrix root = sqrt_psd(rho.matrix());
    for (std::size_t i = 0; i < phis.size(); ++i) {
        require_pair(v.dim(), phis[i].dim(), "otoc_bounds");
        const double t1 = clamped_angle((root * (vw.adjoint() * phis[i].amplitudes())).norm());
        const double t2 = clamped_angle((root * (wv.adjoint() * phis[i].amplitudes())).norm());
        const double bound = std::cos(t1 - t2);
        r.rhs_terms.emplace_back("pps-bound-" + std::to_string(i + 1), bound);
        r.rhs_total = std::min(r.rhs_total, bound);
    }
    finalize_upper_bound(r, saturation_tol);
    return r;
}

CommutingWitness commuting_witness() {
    CMatrix am(2, 2), bm(2, 2);
    am << 1, 0, 0, 2;
    bm << 3, 0, 0, 1;
    CVector zero(2), plus(2);
    zero << 1, 0;
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    CommutingWitness w{Observable(am), Observable(bm), PureState(zero),
                       PureState::normalized(plus), BoundReport{}};
    w.report = pps_ur(w.a, w.b, w.psi, w.phi, true);
    return w;
}

} // namespace pps
