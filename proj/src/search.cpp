#include "pps/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pps/errors.hpp"
#include "pps/linalg.hpp"
#include "pps/relations.hpp"
#include "pps/rng.hpp"

namespace pps {

namespace {

// Candidates this close to orthogonal with the pre-selection are rejected
// for weak-value-based objectives; the quantities are not defined there.
constexpr double kBarrierOverlap = 1e-6;

double worst_value(bool maximize) {
    return maximize ? -std::numeric_limits<double>::infinity()
                    : std::numeric_limits<double>::infinity();
}

void require_same_dim(int got, int want, const char* who) {
    if (got != want) throw DimensionMismatch(std::string(who) + ": operand dimensions differ");
}

// Hypersphere chart with the global phase gauge-fixed: d-1 polar angles in
// t[0..d-2], d-1 phases for components 1..d-1 in t[d-1..2d-3]. Magnitudes
// telescope to unit norm; cos may go negative, which just revisits the
// sphere with a pi phase shift.
PureState state_from_angles(const std::vector<double>& t, int dim) {
    CVector amp(dim);
    double radial = 1.0;
    for (int k = 0; k < dim; ++k) {
        double mag = radial;
        if (k < dim - 1) {
            mag *= std::cos(t[static_cast<std::size_t>(k)]);
            radial *= std::sin(t[static_cast<std::size_t>(k)]);
        }
        const double phase = (k == 0) ? 0.0 : t[static_cast<std::size_t>(dim - 2 + k)];
        amp[k] = Complex(mag * std::cos(phase), mag * std::sin(phase));
    }
    amp /= amp.norm();
    return PureState(amp);
}

std::vector<double> draw_angles(int dim, Rng& rng) {
    std::vector<double> t(static_cast<std::size_t>(2 * (dim - 1)));
    for (int k = 0; k < dim - 1; ++k)
        t[static_cast<std::size_t>(k)] = rng.uniform(0.0, std::numbers::pi);
    for (int k = dim - 1; k < 2 * (dim - 1); ++k)
        t[static_cast<std::size_t>(k)] = rng.uniform(0.0, 2.0 * std::numbers::pi);
    return t;
}

} // namespace

Objective objective_stronger_ur_rhs(const Observable& a, const Observable& b,
                                    const PureState& psi) {
    require_same_dim(b.dim(), a.dim(), "objective_stronger_ur_rhs");
    require_same_dim(psi.dim(), a.dim(), "objective_stronger_ur_rhs");
    Objective obj;
    obj.name = "stronger-ur-rhs-max";
    obj.dim = psi.dim();
    obj.maximize = true;
    obj.fn = [a, b, psi](const PureState& phi) -> double {
        if (std::abs(phi.amplitudes().dot(psi.amplitudes())) <= kBarrierOverlap)
            return worst_value(true);
        try {
            return stronger_ur(a, b, psi, phi, false).rhs_total;
        } catch (const WeakValueUndefined&) {
            return worst_value(true);
        }
    };
    return obj;
}

Objective objective_otoc_pps_bound(const UnitaryOp& v, const UnitaryOp& w_t,
                                   const DensityMatrix& rho) {
    require_same_dim(w_t.dim(), v.dim(), "objective_otoc_pps_bound");
    require_same_dim(rho.dim(), v.dim(), "objective_otoc_pps_bound");
    Objective obj;
    obj.name = "otoc-pps-bound-min";
    obj.dim = rho.dim();
    obj.maximize = false;
    obj.fn = [v, w_t, rho](const PureState& phi) -> double {
        // Single-phi report: rhs_terms = [baseline, post-selected]; the
        // post-selected bound is the one being minimized.
        return otoc_bounds(v, w_t, rho, {phi}).rhs_terms.back().second;
    };
    return obj;
}

Objective objective_intelligent_residual(const Observable& a, const Observable& b,
                                         const PureState& psi) {
    require_same_dim(b.dim(), a.dim(), "objective_intelligent_residual");
    require_same_dim(psi.dim(), a.dim(), "objective_intelligent_residual");
    Objective obj;
    obj.name = "intelligent-residual-min";
    obj.dim = psi.dim();
    obj.maximize = false;
    obj.fn = [a, b, psi](const PureState& phi) -> double {
        if (std::abs(phi.amplitudes().dot(psi.amplitudes())) <= kBarrierOverlap)
            return worst_value(false);
        try {
            return std::min(intelligent_residual(a, b, psi, phi, +1),
                            intelligent_residual(a, b, psi, phi, -1));
        } catch (const ResidualUndefined&) {
            return worst_value(false);
        } catch (const WeakValueUndefined&) {
            return worst_value(false);
        }
    };
    return obj;
}

SearchResult optimize_postselection(const Objective& objective, int dim,
                                    const SearchConfig& config) {
    if (objective.name != "stronger-ur-rhs-max" && objective.name != "otoc-pps-bound-min" &&
        objective.name != "intelligent-residual-min")
        throw std::invalid_argument("optimize_postselection: unknown objective name: " +
                                    objective.name);
    if (!objective.fn)
        throw std::invalid_argument("optimize_postselection: objective has no callable");
    if (dim < 2) throw std::invalid_argument("optimize_postselection: dim must be >= 2");
    require_same_dim(objective.dim, dim, "optimize_postselection");
    if (config.restarts < 1)
        throw std::invalid_argument("optimize_postselection: restarts must be >= 1");
    if (config.max_iters < 1)
        throw std::invalid_argument("optimize_postselection: max_iters must be >= 1");
    if (!(config.step_init > 0.0) || !(config.step_min > 0.0))
        throw std::invalid_argument("optimize_postselection: steps must be positive");
    if (!(config.step_min < config.step_init))
        throw std::invalid_argument("optimize_postselection: step_min must be below step_init");

    const auto eval = [&](const std::vector<double>& t) { return objective.fn(state_from_angles(t, dim)); };
    const auto better = [&](double v, double ref) { return objective.maximize ? v > ref : v < ref; };

    std::vector<double> trace;
    trace.reserve(static_cast<std::size_t>(config.restarts));
    std::vector<double> winner_angles;
    double winner_value = worst_value(objective.maximize);
    bool winner_floor = false;

    for (int r = 0; r < config.restarts; ++r) {
        Rng rng(config.rng_seed + 1000003ULL * static_cast<std::uint64_t>(r));
        std::vector<double> angles = draw_angles(dim, rng);
        double cur = eval(angles);
        for (int tries = 0; !std::isfinite(cur) && tries < 64; ++tries) {
            angles = draw_angles(dim, rng);
            cur = eval(angles);
        }

        double step = config.step_init;
        bool floor_hit = false;
        for (int iter = 0; iter < config.max_iters; ++iter) {
            bool improved = false;
            for (std::size_t c = 0; c < angles.size(); ++c) {
                for (const double delta : {step, -step}) {
                    std::vector<double> cand = angles;
                    cand[c] += delta;
                    const double v = eval(cand);
                    if (better(v, cur)) {
                        cur = v;
                        angles = cand;
                        improved = true;
                    }
                }
            }
            if (!improved) {
                step *= 0.5;
                if (step < config.step_min) {
                    floor_hit = true;
                    break;
                }
            }
        }

        trace.push_back(cur);
        // Strict comparison keeps the lowest restart index on ties.
        if (winner_angles.empty() || better(cur, winner_value)) {
            winner_value = cur;
            winner_angles = angles;
            winner_floor = floor_hit;
        }
    }

    PureState best_phi(fix_global_phase(state_from_angles(winner_angles, dim).amplitudes()));
    // Evaluate at the returned (phase-fixed) state so the reported value is
    // exactly reproducible from the result fields.
    const double best_objective = objective.fn(best_phi);
    return SearchResult{std::move(best_phi), best_objective, std::move(trace), winner_floor};
}

} // namespace pps
