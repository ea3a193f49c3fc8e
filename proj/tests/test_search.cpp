#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <limits>

#include "pps/random.hpp"
#include "pps/relations.hpp"
#include "pps/search.hpp"

using namespace pps;

namespace {

constexpr double kPi = 3.14159265358979323846;
const Complex kI(0.0, 1.0);

CMatrix pauli_x() { CMatrix m(2, 2); m << 0, 1, 1, 0; return m; }
CMatrix pauli_y() { CMatrix m(2, 2); m << 0, -kI, kI, 0; return m; }
CMatrix pauli_z() { CMatrix m(2, 2); m << 1, 0, 0, -1; return m; }

PureState ket0() { CVector v(2); v << 1, 0; return PureState(v); }
PureState ket1() { CVector v(2); v << 0, 1; return PureState(v); }

UnitaryOp fig2_w() {
    CMatrix m(2, 2);
    m << 1, 1, -kI, kI;
    return UnitaryOp(m / std::sqrt(2.0));
}

} // namespace

TEST_CASE("intelligent residual search recovers the known saturating point") {
    const Observable sx(pauli_x()), sy(pauli_y());
    const Objective obj = objective_intelligent_residual(sx, sy, ket0());
    CHECK(obj.name == "intelligent-residual-min");
    CHECK(obj.dim == 2);
    CHECK_FALSE(obj.maximize);

    SearchConfig cfg;
    cfg.rng_seed = 7;
    const SearchResult res = optimize_postselection(obj, 2, cfg);
    CHECK(res.best_objective <= 1e-6);
    CHECK(res.converged);
    CHECK(res.trace.size() == 16);
    CHECK(std::abs(res.best_objective - obj.fn(res.best_phi)) <= 1e-10);

    // The minimum over restarts is what gets reported (up to the phase fix).
    double best_trace = std::numeric_limits<double>::infinity();
    for (const double t : res.trace) best_trace = std::min(best_trace, t);
    CHECK(res.best_objective == doctest::Approx(best_trace).epsilon(1e-9));

    // A vanishing residual certifies saturation of the product bound.
    const BoundReport r = pps_ur(sx, sy, ket0(), res.best_phi, false);
    CHECK(r.gap <= 1e-8);
    CHECK(r.gap >= -kGapTol);
}

TEST_CASE("otoc bound search beats the hand-picked post-selections") {
    const UnitaryOp v(pauli_z()), w = fig2_w();
    const DensityMatrix rho = DensityMatrix::from_pure(make_qubit_state(1.0, kPi / 11.0));
    const PureState phi1 = make_qubit_state(kPi / 2.0, kPi / 2.0);
    const PureState phi2 = make_qubit_state(kPi / 4.0, kPi / 2.0);

    const Objective obj = objective_otoc_pps_bound(v, w, rho);
    CHECK(obj.name == "otoc-pps-bound-min");
    CHECK_FALSE(obj.maximize);

    SearchConfig cfg;
    cfg.rng_seed = 11;
    const SearchResult res = optimize_postselection(obj, 2, cfg);
    const double at_phi1 = obj.fn(phi1);
    const double at_phi2 = obj.fn(phi2);
    CHECK(res.best_objective <= std::min(at_phi1, at_phi2) + 1e-12);
    CHECK(std::abs(res.best_objective - obj.fn(res.best_phi)) <= 1e-10);

    // Whatever the search finds must still upper-bound the correlator.
    const double abs_f = std::abs(otoc_value(v, w, rho));
    CHECK(abs_f <= res.best_objective + 1e-9);

    // The per-phi objective agrees with the report it is extracted from.
    const BoundReport direct = otoc_bounds(v, w, rho, {phi1, phi2});
    CHECK(at_phi1 == doctest::Approx(direct.rhs_terms[1].second).epsilon(1e-12));
    CHECK(at_phi2 == doctest::Approx(direct.rhs_terms[2].second).epsilon(1e-12));
}

TEST_CASE("stronger bound search finds a nontrivial value at an eigenstate") {
    const Observable sz(pauli_z()), sx(pauli_x());
    const Objective obj = objective_stronger_ur_rhs(sz, sx, ket0());
    CHECK(obj.name == "stronger-ur-rhs-max");
    CHECK(obj.maximize);

    SearchConfig cfg;
    cfg.rng_seed = 13;
    const SearchResult res = optimize_postselection(obj, 2, cfg);
    CHECK(res.best_objective > 1e-3);
    CHECK(std::abs(res.best_objective - obj.fn(res.best_phi)) <= 1e-10);

    // phi = (|0> + i|1>)/sqrt(2) gives Im W = -1/2, so 1/4 is reachable.
    CVector probe(2);
    probe << 1.0, kI;
    CHECK(res.best_objective >= obj.fn(PureState::normalized(probe)) - 1e-9);
}

TEST_CASE("objectives are gauge invariant and barrier infeasible candidates") {
    const Observable sx(pauli_x()), sy(pauli_y());
    const Objective intel = objective_intelligent_residual(sx, sy, ket0());
    const Objective strong = objective_stronger_ur_rhs(sx, sy, ket0());
    const Objective otoc = objective_otoc_pps_bound(
        UnitaryOp(pauli_z()), fig2_w(), DensityMatrix::from_pure(ket0()));

    Rng rng(17);
    for (int i = 0; i < 10; ++i) {
        const PureState phi = random_pure(2, rng);
        const double alpha = rng.uniform(0.0, 2.0 * kPi);
        const PureState rotated(phi.amplitudes() * std::exp(kI * alpha));
        for (const Objective* obj : {&intel, &strong, &otoc}) {
            const double v0 = obj->fn(phi);
            if (!std::isfinite(v0)) continue;
            CHECK(std::abs(v0 - obj->fn(rotated)) <= 1e-12);
        }
    }

    // |1> is orthogonal to the pre-selection: worst value, not a throw.
    CHECK(intel.fn(ket1()) == std::numeric_limits<double>::infinity());
    CHECK(strong.fn(ket1()) == -std::numeric_limits<double>::infinity());
    // The correlator bound needs no pre-selection, so it stays finite.
    CHECK(std::isfinite(otoc.fn(ket1())));
}

TEST_CASE("search is deterministic and works beyond qubits") {
    Rng rng(19);
    const Observable a = random_observable(3, rng);
    const Observable b = random_observable(3, rng);
    const PureState psi = random_pure(3, rng);
    const Objective obj = objective_intelligent_residual(a, b, psi);
    CHECK(obj.dim == 3);

    SearchConfig cfg;
    cfg.rng_seed = 23;
    const SearchResult r1 = optimize_postselection(obj, 3, cfg);
    const SearchResult r2 = optimize_postselection(obj, 3, cfg);
    CHECK(r1.best_objective == r2.best_objective);
    CHECK(r1.converged == r2.converged);
    REQUIRE(r1.trace.size() == r2.trace.size());
    for (std::size_t i = 0; i < r1.trace.size(); ++i) CHECK(r1.trace[i] == r2.trace[i]);
    CHECK((r1.best_phi.amplitudes() - r2.best_phi.amplitudes()).norm() == 0.0);

    // The descended optimum dominates blind sampling.
    Rng probe_rng(29);
    for (int i = 0; i < 50; ++i) {
        const PureState probe = random_post_admissible(psi, probe_rng);
        const double v = obj.fn(probe);
        if (std::isfinite(v)) CHECK(r1.best_objective <= v + 1e-9);
    }
    CHECK(std::abs(r1.best_objective - obj.fn(r1.best_phi)) <= 1e-10);
}

TEST_CASE("search validates its configuration and objective") {
    const Observable sx(pauli_x()), sy(pauli_y());
    const Objective obj = objective_intelligent_residual(sx, sy, ket0());

    SearchConfig bad;
    bad.restarts = 0;
    CHECK_THROWS_AS(optimize_postselection(obj, 2, bad), std::invalid_argument);
    bad = SearchConfig{};
    bad.max_iters = 0;
    CHECK_THROWS_AS(optimize_postselection(obj, 2, bad), std::invalid_argument);
    bad = SearchConfig{};
    bad.step_init = -0.5;
    CHECK_THROWS_AS(optimize_postselection(obj, 2, bad), std::invalid_argument);
    bad = SearchConfig{};
    bad.step_min = 0.7; // above step_init
    CHECK_THROWS_AS(optimize_postselection(obj, 2, bad), std::invalid_argument);

    CHECK_THROWS_AS(optimize_postselection(obj, 1, SearchConfig{}), std::invalid_argument);
    CHECK_THROWS_AS(optimize_postselection(obj, 3, SearchConfig{}), DimensionMismatch);

    Objective bogus = obj;
    bogus.name = "fastest-descent";
    CHECK_THROWS_AS(optimize_postselection(bogus, 2, SearchConfig{}), std::invalid_argument);
    Objective empty = obj;
    empty.fn = nullptr;
    CHECK_THROWS_AS(optimize_postselection(empty, 2, SearchConfig{}), std::invalid_argument);

    // Factory-level dimension checks fire before any search runs.
    Rng rng(1);
    CHECK_THROWS_AS(objective_intelligent_residual(sx, sy, random_pure(3, rng)),
                    DimensionMismatch);
}

