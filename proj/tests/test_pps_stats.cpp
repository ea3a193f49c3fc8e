#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pps/pps_stats.hpp"
#include "pps/random.hpp"

using namespace pps;

namespace {

const Complex I{0.0, 1.0};
const double kPi = 3.14159265358979323846;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

PureState ket(int index, int dim) {
    CVector v = CVector::Zero(dim);
    v(index) = 1.0;
    return PureState(std::move(v));
}

PureState plus_state() {
    CVector v(2);
    v << kInvSqrt2, kInvSqrt2;
    return PureState(std::move(v));
}

Observable sigma_x() {
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return Observable(std::move(m));
}

Observable sigma_z() {
    CMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return Observable(std::move(m));
}

// (I + sigma_x)/sqrt(2): the saturating-example observable
Observable obs_a_example() {
    CMatrix m(2, 2);
    m << kInvSqrt2, kInvSqrt2, kInvSqrt2, kInvSqrt2;
    return Observable(std::move(m));
}

} // namespace

TEST_CASE("weak values: expectation reduction, anomaly, admissibility") {
    CHECK(std::abs(weak_value(sigma_z(), ket(0, 2), ket(0, 2)) - Complex{1, 0}) < 1e-12);
    CHECK(std::abs(weak_value(sigma_x(), ket(0, 2), plus_state()) - Complex{1, 0}) < 1e-12);

    // nearly orthogonal pre/post drives the value far outside the spectrum
    const double alpha = kPi / 4.0 - 0.05;
    CVector post_amp(2);
    post_amp << std::cos(alpha), -std::sin(alpha);
    const Complex anomalous = weak_value(sigma_z(), plus_state(), PureState(post_amp));
    CHECK(anomalous.real() == doctest::Approx(1.0 / std::tan(0.05)).epsilon(1e-10));
    CHECK(std::abs(anomalous.imag()) < 1e-12);
    CHECK(anomalous.real() > 19.9);

    CHECK_THROWS_AS(weak_value(sigma_z(), ket(0, 2), ket(1, 2)), WeakValueUndefined);
    CHECK_THROWS_AS(weak_value(sigma_z(), ket(0, 2), ket(0, 3)), DimensionMismatch);
}

TEST_CASE("mixed weak value reduces to pure on rank-1 and handles I/2") {
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const Observable a = random_observable(2, rng);
        const PureState psi = random_pure(2, rng);
        const PureState phi = random_post_admissible(psi, rng);
        const Complex pure = weak_value(a, psi, phi);
        const Complex mixed = weak_value_mixed(a, DensityMatrix::from_pure(psi), phi);
        CHECK(std::abs(pure - mixed) < 1e-10);
    }
    const DensityMatrix max_mixed(CMatrix::Identity(2, 2) / 2.0);
    CHECK(std::abs(weak_value_mixed(sigma_x(), max_mixed, ket(0, 2))) < 1e-12);
    CHECK(std::abs(weak_value_mixed(sigma_z(), max_mixed, ket(0, 2)) - Complex{1, 0}) < 1e-12);
    CHECK_THROWS_AS(weak_value_mixed(sigma_z(), DensityMatrix::from_pure(ket(0, 2)), ket(1, 2)),
                    WeakValueUndefined);
}

TEST_CASE("standard deviation basics") {
    CHECK(std_standard(sigma_z(), ket(0, 2)) == doctest::Approx(0.0));
    CHECK(std_standard(sigma_x(), ket(0, 2)) == doctest::Approx(1.0));
    CHECK(std_standard(sigma_z(), plus_state()) == doctest::Approx(1.0));
}

TEST_CASE("av_decompose reconstructs A|psi> and flags eigenstates") {
    const auto d = av_decompose(sigma_x(), ket(0, 2));
    CHECK(std::abs(d.mean) < 1e-12);
    CHECK(d.deviation == doctest::Approx(1.0));
    CHECK(std::abs(d.residual_state.amplitudes()(1) - Complex{1, 0}) < 1e-12);

    CHECK_THROWS_AS(av_decompose(sigma_z(), ket(0, 2)), ResidualUndefined);

    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const int dim = 2 + static_cast<int>(rng.integer(3));
        const Observable a = random_observable(dim, rng);
        const PureState psi = random_pure(dim, rng);
        AVDecomposition dec{Complex{}, 0.0, psi};
        try {
            dec = av_decompose(a, psi);
        } catch (const ResidualUndefined&) {
            continue;
        }
        const CVector rebuilt = dec.mean * psi.amplitudes() +
                                dec.deviation * dec.residual_state.amplitudes();
        CHECK((rebuilt - a.matrix() * psi.amplitudes()).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(std::abs(psi.amplitudes().dot(dec.residual_state.amplitudes())) < 1e-10);
    }
}

TEST_CASE("std_pps: saturating example, reduction, eigenstate pre") {
    CHECK(std_pps(obs_a_example(), ket(0, 2), plus_state()) <= 1e-12);

    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int dim = 2 + static_cast<int>(rng.integer(3));
        const Observable a = random_observable(dim, rng);
        const PureState psi = random_pure(dim, rng);
        CHECK(std::abs(std_pps(a, psi, psi) - std_standard(a, psi)) <= 1e-10);
    }

    CHECK(std_pps(sigma_z(), ket(0, 2), plus_state()) == doctest::Approx(kInvSqrt2));
}

TEST_CASE("pps_decompose: worked qubit case and the reconstruction invariant") {
    const auto d = pps_decompose(sigma_z(), ket(0, 2), plus_state());
    CHECK(std::abs(d.mean - Complex{kInvSqrt2, 0}) < 1e-12);
    CHECK(d.deviation == doctest::Approx(kInvSqrt2));
    CHECK(std::abs(d.residual_state.amplitudes()(0) - Complex{kInvSqrt2, 0}) < 1e-12);
    CHECK(std::abs(d.residual_state.amplitudes()(1) + Complex{kInvSqrt2, 0}) < 1e-12);

    // post proportional to A|psi> leaves nothing orthogonal to decompose
    CHECK_THROWS_AS(pps_decompose(obs_a_example(), ket(0, 2), plus_state()),
                    ResidualUndefined);

    const auto via_pps = pps_decompose(sigma_x(), ket(0, 2), ket(0, 2));
    const auto via_av = av_decompose(sigma_x(), ket(0, 2));
    CHECK(std::abs(via_pps.mean - via_av.mean) < 1e-12);
    CHECK(via_pps.deviation == doctest::Approx(via_av.deviation));

    Rng rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const int dim = 2 + static_cast<int>(rng.integer(3));
        const Observable a = random_observable(dim, rng);
        const PureState psi = random_pure(dim, rng);
        const PureState phi = random_pure(dim, rng);
        AVDecomposition dec{Complex{}, 0.0, psi};
        try {
            dec = pps_decompose(a, psi, phi);
        } catch (const ResidualUndefined&) {
            continue;
        }
        const CVector rebuilt = dec.mean * phi.amplitudes() +
                                dec.deviation * dec.residual_state.amplitudes();
        CHECK((rebuilt - a.matrix() * psi.amplitudes()).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(std::abs(phi.amplitudes().dot(dec.residual_state.amplitudes())) < 1e-10);
    }
}

TEST_CASE("identity expansion matches std_pps for every completion seed") {
    CHECK(std_pps_infotheoretic(sigma_z(), ket(0, 2), plus_state(), 1) ==
          doctest::Approx(kInvSqrt2));
    CHECK(std_pps_infotheoretic(obs_a_example(), ket(0, 2), plus_state(), 1) <= 1e-12);

    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const int dim = 2 + static_cast<int>(rng.integer(3));
        const Observable a = random_observable(dim, rng);
        const PureState psi = random_pure(dim, rng);
        const PureState phi = random_pure(dim, rng);
        const double direct = std_pps(a, psi, phi);
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            CHECK(std::abs(std_pps_infotheoretic(a, psi, phi, seed) - direct) <= 1e-9);
        }
    }
}

TEST_CASE("zero-uncertainty post-selection") {
    CHECK(std::abs(zero_uncertainty_postselection(sigma_x(), ket(0, 2)).amplitudes()(1) -
                   Complex{1, 0}) < 1e-12);
    CHECK(std::abs(zero_uncertainty_postselection(sigma_z(), ket(0, 2)).amplitudes()(0) -
                   Complex{1, 0}) < 1e-12);
    const PureState common = zero_uncertainty_postselection(obs_a_example(), ket(0, 2));
    CHECK(std::abs(common.amplitudes()(0) - Complex{kInvSqrt2, 0}) < 1e-12);
    CHECK(std::abs(common.amplitudes()(1) - Complex{kInvSqrt2, 0}) < 1e-12);

    CMatrix lower(2, 2);
    lower << 0, 0, 0, 1;
    CHECK_THROWS_AS(zero_uncertainty_postselection(Observable(lower), ket(0, 2)),
                    DegenerateInput);

    Rng rng(19);
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = 2 + static_cast<int>(rng.integer(3));
        const Observable a = random_observable(dim, rng);
        const PureState psi = random_pure(dim, rng);
        CHECK(std_pps(a, psi, zero_uncertainty_postselection(a, psi)) <= 1e-9);
    }
}

TEST_CASE("maximum-uncertainty post-selection attains the supremum") {
    const auto [phi_z, vz] = max_uncertainty_postselection(sigma_z(), ket(0, 2), 5);
    CHECK(std::abs(phi_z.amplitudes()(1)) == doctest::Approx(1.0));
    CHECK(vz == doctest::Approx(1.0));

    const auto [phi_x, vx] = max_uncertainty_postselection(sigma_x(), ket(0, 2), 5);
    CHECK(std::abs(phi_x.amplitudes()(0)) == doctest::Approx(1.0));
    CHECK(vx == doctest::Approx(1.0));

    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = 2 + static_cast<int>(rng.integer(3));
        const Observable a = random_observable(dim, rng);
        const PureState psi = random_pure(dim, rng);
        const auto [phi, value] = max_uncertainty_postselection(a, psi, trial);
        CHECK(std_pps(a, psi, phi) == doctest::Approx(value).epsilon(1e-9));
        for (int probe = 0; probe < 100; ++probe) {
            CHECK(std_pps(a, psi, random_pure(dim, rng)) <= value + 1e-9);
        }
    }
}

TEST_CASE("metrology: Fisher information and the success-probability identity") {
    Rng rng(29);
    for (int trial = 0; trial < 200; ++trial) {
        const int dim = 2 + static_cast<int>(rng.integer(3));
        const Observable a = random_observable(dim, rng);
        const PureState psi = random_pure(dim, rng);
        const PureState phi = random_pure(dim, rng);
        const auto rep = metrology_report(a, psi, phi, 1.0);
        CHECK(rep.fisher_phi >= 0.0);
        CHECK(rep.fisher_phi <= rep.fisher_max + 1e-9);

        const auto at_best =
            metrology_report(a, psi, zero_uncertainty_postselection(a, psi), 1.0);
        CHECK(std::abs(at_best.fisher_phi - at_best.fisher_max) <= 1e-9);

        if (rep.p_z && rep.weak_value_at_phi_z) {
            const double dev = std_standard(a, psi);
            const double rhs =
                (1.0 - *rep.p_z) * *rep.p_z * std::norm(*rep.weak_value_at_phi_z);
            CHECK(std::abs(dev * dev - rhs) <= 1e-9);
        }
    }

    const auto rep = metrology_report(sigma_x(), ket(0, 2), ket(0, 2), 1.0);
    CHECK(rep.fisher_phi == doctest::Approx(0.0));
    CHECK(rep.fisher_max == doctest::Approx(4.0));
    // sigma_x|0> = |1>, phi_z = |1> orthogonal to psi: probability present, weak value not
    REQUIRE(rep.p_z.has_value());
    CHECK(*rep.p_z == doctest::Approx(0.0));
    CHECK_FALSE(rep.weak_value_at_phi_z.has_value());

    CHECK_THROWS_AS(metrology_report(sigma_x(), ket(0, 2), ket(0, 2), 0.0),
                    std::invalid_argument);

    // sigma scaling enters as 4 sigma^2
    const auto scaled = metrology_report(sigma_x(), ket(0, 2), plus_state(), 3.0);
    CHECK(scaled.fisher_max == doctest::Approx(36.0));
}

TEST_CASE("mixed deviation: rank-1 reduction and mixing linearity") {
    Rng rng(37);
    for (int trial = 0; trial < 50; ++trial) {
        const int dim = 2 + static_cast<int>(rng.integer(3));
        const Observable a = random_observable(dim, rng);
        const PureState psi = random_pure(dim, rng);
        const PureState phi = random_pure(dim, rng);
        CHECK(std::abs(std_pps_mixed(a, DensityMatrix::from_pure(psi), phi) -
                       std_pps(a, psi, phi)) <= 1e-9);
    }

    const DensityMatrix max_mixed(CMatrix::Identity(2, 2) / 2.0);
    CHECK(std_pps_mixed(sigma_x(), max_mixed, ket(0, 2)) == doctest::Approx(kInvSqrt2));

    for (int trial = 0; trial < 50; ++trial) {
        const int dim = 2 + static_cast<int>(rng.integer(3));
        const Observable a = random_observable(dim, rng);
        const PureState phi = random_pure(dim, rng);
        const PureState s1 = random_pure(dim, rng);
        const PureState s2 = random_pure(dim, rng);
        const PureState s3 = random_pure(dim, rng);
        const double p1 = 0.2, p2 = 0.5, p3 = 0.3;
        const auto rho = ensemble_to_density({p1, p2, p3}, {s1, s2, s3});
        const double mixed_sq = std::pow(std_pps_mixed(a, rho, phi), 2);
        const double member_sq = p1 * std::pow(std_pps(a, s1, phi), 2) +
                                 p2 * std::pow(std_pps(a, s2, phi), 2) +
                                 p3 * std::pow(std_pps(a, s3, phi), 2);
        CHECK(std::abs(mixed_sq - member_sq) <= 1e-9);
    }
}

TEST_CASE("weak-value deviation dominates the quantum one, equality iff pure") {
    Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = 2 + static_cast<int>(rng.integer(3));
        const Observable a = random_observable(dim, rng);
        const auto rho = random_density(dim, rng);
        const PureState phi = random_pure(dim, rng);
        if (phi.amplitudes().dot(rho.matrix() * phi.amplitudes()).real() <= 1e-8) continue;
        CHECK(std_pps_mixed_weak(a, rho, phi) >= std_pps_mixed(a, rho, phi) - 1e-10);
    }
    for (int trial = 0; trial < 50; ++trial) {
        const Observable a = random_observable(3, rng);
        const PureState psi = random_pure(3, rng);
        const PureState phi = random_post_admissible(psi, rng, 1e-4);
        const auto rho = DensityMatrix::from_pure(psi);
        CHECK(std::abs(std_pps_mixed_weak(a, rho, phi) - std_pps_mixed(a, rho, phi)) <=
              1e-10);
    }
    const DensityMatrix max_mixed(CMatrix::Identity(2, 2) / 2.0);
    CHECK(std_pps_mixed_weak(sigma_x(), max_mixed, ket(0, 2)) == doctest::Approx(1.0));
}

TEST_CASE("classical uncertainty: zero for pure, 1/2 for the textbook mixed case") {
    Rng rng(43);
    for (int trial = 0; trial < 50; ++trial) {
        const Observable a = random_observable(3, rng);
        const PureState psi = random_pure(3, rng);
        const PureState phi = random_post_admissible(psi, rng, 1e-4);
        CHECK(classical_uncertainty(DensityMatrix::from_pure(psi), a, phi) <= 1e-10);
    }
    const DensityMatrix max_mixed(CMatrix::Identity(2, 2) / 2.0);
    CHECK(classical_uncertainty(max_mixed, sigma_x(), ket(0, 2)) == doctest::Approx(0.5));
}

TEST_CASE("classical uncertainty is additive over product systems") {
    Rng rng(47);
    for (int trial = 0; trial < 30; ++trial) {
        const auto rho1 = random_density(2, rng);
        const auto rho2 = random_density(2, rng);
        const Observable a1 = random_observable(2, rng);
        const Observable a2 = random_observable(2, rng);
        const PureState f1 = random_pure(2, rng);
        const PureState f2 = random_pure(2, rng);

        const auto rho = tensor_product(rho1, rho2);
        const PureState phi = tensor_product(f1, f2);
        const Observable id2(CMatrix::Identity(2, 2));
        const Observable a1_ext = tensor_product(a1, id2);
        const Observable a2_ext = tensor_product(id2, a2);
        const Observable total(a1_ext.matrix() + a2_ext.matrix());

        const double q1 = f1.amplitudes().dot(rho1.matrix() * f1.amplitudes()).real();
        const double q2 = f2.amplitudes().dot(rho2.matrix() * f2.amplitudes()).real();
        if (q1 <= 1e-6 || q2 <= 1e-6) continue;

        // the composite gap splits into the two component-observable gaps
        const double whole = classical_uncertainty(rho, total, phi);
        const double part1 = classical_uncertainty(rho, a1_ext, phi);
        const double part2 = classical_uncertainty(rho, a2_ext, phi);
        CHECK(std::abs(whole - part1 - part2) <= 1e-9);

        // and each component gap is the local gap scaled by the partner's
        // post-selection probability
        CHECK(std::abs(part1 - q2 * classical_uncertainty(rho1, a1, f1)) <= 1e-9);
        CHECK(std::abs(part2 - q1 * classical_uncertainty(rho2, a2, f2)) <= 1e-9);
    }
}
