#include "pps/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

#include "pps/errors.hpp"
#include "pps/pps_stats.hpp"
#include "pps/purity.hpp"
#include "pps/search.hpp"

namespace pps {

namespace {

ScenarioError bad(const std::string& msg) { return ScenarioError("scenario: " + msg); }

CMatrix pauli_x() { CMatrix m(2, 2); m << 0, 1, 1, 0; return m; }
CMatrix pauli_y() {
    CMatrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}
CMatrix pauli_z() { CMatrix m(2, 2); m << 1, 0, 0, -1; return m; }

CVector ket0() { CVector v(2); v << 1, 0; return v; }
CVector ket1() { CVector v(2); v << 0, 1; return v; }

struct KindSchema {
    std::vector<std::string> required;
    std::vector<std::string> optional;
};

const std::map<std::string, KindSchema>& schemas() {
    static const std::map<std::string, KindSchema> table = {
        {"fig1", {{}, {"points", "theta_min", "theta_max", "omega", "eta", "xi", "out"}}},
        {"fig2", {{}, {"points", "theta_min", "theta_max", "identity_wt", "out"}}},
        {"obs2", {{}, {"pre", "out"}}},
        {"purity-demo", {{}, {"seed", "samples", "out"}}},
        {"verify", {{}, {"seed", "samples", "dims", "out"}}},
        {"search",
         {{"objective"},
          {"seed", "restarts", "max_iters", "step_init", "step_min", "a", "b", "psi", "v",
           "w_t", "rho", "out"}}},
        {"eval",
         {{"relation"},
          {"a", "b", "psi", "phi", "psi_perp", "rho", "u", "v", "w_t", "phis",
           "include_schrodinger", "sign", "rng_seed", "tolerance", "out"}}},
    };
    return table;
}

// Typed field access; every type violation is a scenario error, never a
// json exception leaking out.
double get_real(const Json& d, const char* key, double fallback) {
    if (!d.contains(key)) return fallback;
    const Json& j = d.at(key);
    if (!j.is_number()) throw bad(std::string(key) + " must be a number");
    return j.get<double>();
}

int get_count(const Json& d, const char* key, int fallback, int min_value) {
    if (!d.contains(key)) return fallback;
    const Json& j = d.at(key);
    if (!j.is_number_integer()) throw bad(std::string(key) + " must be an integer");
    const long long v = j.get<long long>();
    if (v < min_value)
        throw bad(std::string(key) + " must be >= " + std::to_string(min_value));
    return static_cast<int>(v);
}

std::uint64_t get_seed(const Json& d, const char* key, std::uint64_t fallback) {
    if (!d.contains(key)) return fallback;
    const Json& j = d.at(key);
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<long long>() >= 0)
        return static_cast<std::uint64_t>(j.get<long long>());
    throw bad(std::string(key) + " must be a nonnegative integer");
}

bool get_flag(const Json& d, const char* key, bool fallback) {
    if (!d.contains(key)) return fallback;
    const Json& j = d.at(key);
    if (!j.is_boolean()) throw bad(std::string(key) + " must be a boolean");
    return j.get<bool>();
}

Complex parse_complex(const Json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw bad(std::string(what) + ": complex entries must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

CVector parse_vector(const Json& j, const char* what) {
    if (!j.is_array() || j.empty()) throw bad(std::string(what) + " must be a nonempty array");
    CVector v(static_cast<int>(j.size()));
    for (int i = 0; i < v.size(); ++i) v[i] = parse_complex(j[static_cast<std::size_t>(i)], what);
    return v;
}

CMatrix parse_matrix(const Json& j, const char* what) {
    if (!j.is_array() || j.empty()) throw bad(std::string(what) + " must be a nonempty array");
    const std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty())
        throw bad(std::string(what) + " rows must be nonempty arrays");
    const std::size_t cols = j[0].size();
    CMatrix m(static_cast<int>(rows), static_cast<int>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw bad(std::string(what) + " rows must have equal length");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<int>(r), static_cast<int>(c)) = parse_complex(j[r][c], what);
    }
    return m;
}

PureState parse_state(const Json& j, const char* what) {
    const CVector v = parse_vector(j, what);
    try {
        return PureState::normalized(v);
    } catch (const std::exception& e) {
        throw bad(std::string(what) + ": " + e.what());
    }
}

Observable parse_observable(const Json& j, const char* what) {
    const CMatrix m = parse_matrix(j, what);
    if (m.rows() != m.cols()) throw bad(std::string(what) + " must be square");
    try {
        return Observable(m);
    } catch (const std::exception& e) {
        throw bad(std::string(what) + ": " + e.what());
    }
}

// Density literals are normalized by their trace, so unnormalized mixtures
// are accepted; shape defects are not.
DensityMatrix parse_density(const Json& j, const char* what) {
    const CMatrix m = parse_matrix(j, what);
    if (m.rows() != m.cols()) throw bad(std::string(what) + " must be square");
    const Complex tr = m.trace();
    if (std::abs(tr.imag()) > 1e-9 || tr.real() <= 1e-12)
        throw bad(std::string(what) + " must have positive real trace");
    try {
        return DensityMatrix(CMatrix(m / tr.real()));
    } catch (const std::exception& e) {
        throw bad(std::string(what) + ": " + e.what());
    }
}

UnitaryOp parse_unitary(const Json& j, const char* what) {
    const CMatrix m = parse_matrix(j, what);
    if (m.rows() != m.cols()) throw bad(std::string(what) + " must be square");
    try {
        return UnitaryOp(m);
    } catch (const std::exception& e) {
        throw bad(std::string(what) + ": " + e.what());
    }
}

void append_row(std::string& out, std::initializer_list<double> vals) {
    char buf[40];
    bool first = true;
    for (const double v : vals) {
        std::snprintf(buf, sizeof buf, "%.12g", v);
        if (!first) out += ',';
        out += buf;
        first = false;
    }
    out += '\n';
}

Json property_json(const PropertyResult& p) {
    Json j;
    j["name"] = p.name;
    j["samples"] = p.samples;
    j["failures"] = p.failures;
    j["worst"] = p.worst;
    j["detail"] = p.detail;
    j["passed"] = p.passed;
    return j;
}

Json run_purity_demo(std::uint64_t seed, int samples) {
    Json j;
    j["kind"] = "purity-demo";
    j["seed"] = seed;
    j["samples"] = samples;

    const Observable sx(pauli_x()), sz(pauli_z());
    const PureState k0(ket0());
    const PureState plus = PureState::normalized(ket0() + ket1());
    bool ok = true;

    Json worked;
    const PurityVerdict pure_case = detect_qubit(DensityMatrix::from_pure(plus), sx, k0);
    worked["pure_qubit"] = {{"verdict", to_string(pure_case.verdict)},
                            {"gap", pure_case.gap_values.empty() ? 0.0 : pure_case.gap_values[0]}};
    ok = ok && pure_case.verdict == Verdict::Pure;

    const DensityMatrix maximally(CMatrix(CMatrix::Identity(2, 2) / 2.0));
    const PurityVerdict mixed_case = detect_qubit(maximally, sx, k0, kMixedThreshold);
    worked["maximally_mixed_qubit"] = {
        {"verdict", to_string(mixed_case.verdict)},
        {"gap", mixed_case.gap_values.empty() ? 0.0 : mixed_case.gap_values[0]}};
    ok = ok && mixed_case.verdict == Verdict::Mixed;

    // Classical two-qubit correlation: invisible through the first
    // post-selection, exposed by the second.
    CMatrix raw = CMatrix::Zero(4, 4);
    raw(0, 0) = 0.5;
    raw(3, 3) = 0.5;
    const PurityVerdict hidden = detect_qubit_qubit(DensityMatrix(raw), sz, plus, k0, plus,
                                                    kMixedThreshold);
    Json gaps = Json::array();
    for (const double g : hidden.gap_values) gaps.push_back(g);
    worked["hidden_mixture"] = {{"verdict", to_string(hidden.verdict)}, {"gaps", gaps}};
    ok = ok && hidden.verdict == Verdict::Mixed && hidden.gap_values.size() == 2 &&
         hidden.gap_values[0] <= kMixedThreshold && hidden.gap_values[1] > kMixedThreshold;
    j["worked_instances"] = worked;

    const VerifySummary vs = run_verify(seed, samples, {2});
    Json props = Json::array();
    for (const PropertyResult& p : vs.properties) {
        if (p.name == "purity-pure-never-flagged" || p.name == "purity-mixedness-found" ||
            p.name == "hidden-mixture-needs-second-post") {
            props.push_back(property_json(p));
            ok = ok && p.passed;
        }
    }
    j["properties"] = props;
    j["all_pass"] = ok;
    return j;
}

Json run_search_scenario(const Json& doc) {
    const std::string objective_name = doc.at("objective").is_string()
                                           ? doc.at("objective").get<std::string>()
                                           : throw bad("objective must be a string");
    SearchConfig cfg;
    cfg.rng_seed = get_seed(doc, "seed", 0);
    cfg.restarts = get_count(doc, "restarts", cfg.restarts, 1);
    cfg.max_iters = get_count(doc, "max_iters", cfg.max_iters, 1);
    cfg.step_init = get_real(doc, "step_init", cfg.step_init);
    cfg.step_min = get_real(doc, "step_min", cfg.step_min);

    const auto forbid = [&](std::initializer_list<const char*> keys) {
        for (const char* k : keys)
            if (doc.contains(k))
                throw bad(std::string(k) + " is not used by objective " + objective_name);
    };
    const auto require = [&](std::initializer_list<const char*> keys) {
        for (const char* k : keys)
            if (!doc.contains(k))
                throw bad(std::string("objective ") + objective_name + " requires " + k);
    };

    Objective obj;
    try {
        if (objective_name == "otoc-pps-bound-min") {
            require({"v", "w_t", "rho"});
            forbid({"a", "b", "psi"});
            obj = objective_otoc_pps_bound(parse_unitary(doc.at("v"), "v"),
                                           parse_unitary(doc.at("w_t"), "w_t"),
                                           parse_density(doc.at("rho"), "rho"));
        } else if (objective_name == "stronger-ur-rhs-max" ||
                   objective_name == "intelligent-residual-min") {
            require({"a", "b", "psi"});
            forbid({"v", "w_t", "rho"});
            const Observable a = parse_observable(doc.at("a"), "a");
            const Observable b = parse_observable(doc.at("b"), "b");
            const PureState psi = parse_state(doc.at("psi"), "psi");
            obj = objective_name == "stronger-ur-rhs-max"
                      ? objective_stronger_ur_rhs(a, b, psi)
                      : objective_intelligent_residual(a, b, psi);
        } else {
            throw bad("unknown objective: " + objective_name);
        }

        const SearchResult res = optimize_postselection(obj, obj.dim, cfg);
        Json j;
        j["kind"] = "search";
        j["objective"] = objective_name;
        j["dim"] = obj.dim;
        j["config"] = {{"restarts", cfg.restarts},
                       {"max_iters", cfg.max_iters},
                       {"step_init", cfg.step_init},
                       {"step_min", cfg.step_min},
                       {"rng_seed", cfg.rng_seed}};
        j["best_phi"] = vector_json(res.best_phi.amplitudes());
        j["best_objective"] = res.best_objective;
        j["trace"] = res.trace;
        j["converged"] = res.converged;
        return j;
    } catch (const ScenarioError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw bad(e.what());
    }
}

struct EvalSpec {
    std::vector<std::string> inputs;
    std::vector<std::string> options;
    bool equality = false;
};

const std::map<std::string, EvalSpec>& eval_specs() {
    static const std::map<std::string, EvalSpec> table = {
        {"rhur", {{"a", "b", "psi"}, {"include_schrodinger", "tolerance"}, false}},
        {"pps_ur", {{"a", "b", "psi", "phi"}, {"include_schrodinger", "tolerance"}, false}},
        {"pps_ur_mixed", {{"a", "b", "rho", "phi"}, {"include_schrodinger", "tolerance"}, false}},
        {"stronger_ur", {{"a", "b", "psi", "phi"}, {"include_schrodinger", "tolerance"}, false}},
        {"combined_stronger", {{"a", "b", "psi", "phi"}, {"tolerance"}, false}},
        {"mpur_bounds", {{"a", "b", "psi", "psi_perp"}, {"tolerance"}, false}},
        {"tighter_sum_ur", {{"a", "b", "rho", "phi"}, {"sign", "tolerance"}, false}},
        {"unitary_pps_ur", {{"u", "v", "rho", "phi"}, {"tolerance"}, false}},
        {"otoc_bounds", {{"v", "w_t", "rho", "phis"}, {"tolerance"}, false}},
        {"equality_product", {{"a", "b", "psi", "phi"}, {"rng_seed", "tolerance"}, true}},
        {"equality_sum", {{"a", "b", "psi", "phi"}, {"rng_seed", "tolerance"}, true}},
    };
    return table;
}

std::pair<Json, bool> run_eval(const Json& doc) {
    if (!doc.at("relation").is_string()) throw bad("relation must be a string");
    const std::string relation = doc.at("relation").get<std::string>();
    const auto spec_it = eval_specs().find(relation);
    if (spec_it == eval_specs().end()) throw bad("unknown relation: " + relation);
    const EvalSpec& spec = spec_it->second;

    // Exactly the relation's inputs, and only its options, may appear.
    static const std::vector<std::string> all_keys = {
        "a",   "b", "psi", "phi",  "psi_perp",            "rho",  "u",
        "v",   "w_t", "phis", "include_schrodinger", "sign", "rng_seed",
        "tolerance"};
    const auto in = [](const std::vector<std::string>& v, const std::string& k) {
        for (const std::string& s : v)
            if (s == k) return true;
        return false;
    };
    for (const std::string& k : all_keys) {
        if (!doc.contains(k)) continue;
        if (!in(spec.inputs, k) && !in(spec.options, k))
            throw bad(k + " is not used by relation " + relation);
    }
    for (const std::string& k : spec.inputs)
        if (!doc.contains(k)) throw bad("relation " + relation + " requires " + k);

    const double tol = get_real(doc, "tolerance", spec.equality ? 1e-8 : kSaturationTol);
    if (!(tol > 0.0)) throw bad("tolerance must be positive");
    const bool flag = get_flag(doc, "include_schrodinger", false);
    const std::uint64_t rng_seed = get_seed(doc, "rng_seed", 12345);

    const auto obs = [&](const char* k) { return parse_observable(doc.at(k), k); };
    const auto state = [&](const char* k) { return parse_state(doc.at(k), k); };
    const auto dens = [&](const char* k) { return parse_density(doc.at(k), k); };
    const auto uni = [&](const char* k) { return parse_unitary(doc.at(k), k); };

    Json j;
    j["kind"] = "eval";
    j["relation"] = relation;
    bool passed = true;
    try {
        if (spec.equality) {
            const EqualityReport rep =
                relation == "equality_product"
                    ? equality_product(obs("a"), obs("b"), state("psi"), state("phi"), rng_seed)
                    : equality_sum(obs("a"), obs("b"), state("psi"), state("phi"), rng_seed);
            j["report"] = equality_json(rep);
            passed = std::abs(rep.residual) <= tol;
        } else {
            BoundReport rep;
            if (relation == "rhur") {
                rep = rhur(obs("a"), obs("b"), state("psi"), flag, tol);
            } else if (relation == "pps_ur") {
                rep = pps_ur(obs("a"), obs("b"), state("psi"), state("phi"), flag, tol);
            } else if (relation == "pps_ur_mixed") {
                rep = pps_ur_mixed(obs("a"), obs("b"), dens("rho"), state("phi"), flag, tol);
            } else if (relation == "stronger_ur") {
                rep = stronger_ur(obs("a"), obs("b"), state("psi"), state("phi"), flag, tol);
            } else if (relation == "combined_stronger") {
                rep = combined_stronger(obs("a"), obs("b"), state("psi"), state("phi"), tol);
            } else if (relation == "mpur_bounds") {
                rep = mpur_bounds(obs("a"), obs("b"), state("psi"), state("psi_perp"), tol);
            } else if (relation == "tighter_sum_ur") {
                std::optional<int> sign;
                if (doc.contains("sign")) {
                    const Json& sj = doc.at("sign");
                    if (!sj.is_number_integer() ||
                        (sj.get<long long>() != 1 && sj.get<long long>() != -1))
                        throw bad("sign must be +1 or -1");
                    sign = static_cast<int>(sj.get<long long>());
                }
                rep = tighter_sum_ur(obs("a"), obs("b"), dens("rho"), state("phi"), sign, tol);
            } else if (relation == "unitary_pps_ur") {
                rep = unitary_pps_ur(uni("u"), uni("v"), dens("rho"), state("phi"), tol);
            } else {
                const Json& list = doc.at("phis");
                if (!list.is_array()) throw bad("phis must be an array of states");
                std::vector<PureState> phis;
                for (const Json& e : list) phis.push_back(parse_state(e, "phis"));
                rep = otoc_bounds(uni("v"), uni("w_t"), dens("rho"), phis, tol);
            }
            j["report"] = bound_json(rep);
            passed = rep.gap >= -kGapTol;
        }
    } catch (const ScenarioError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw bad(e.what());
    } catch (const std::domain_error& e) {
        throw bad(e.what());
    }
    j["passed"] = passed;
    return {j, passed};
}

} // namespace

Json complex_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Json vector_json(const CVector& v) {
    Json j = Json::array();
    for (int i = 0; i < v.size(); ++i) j.push_back(complex_json(v[i]));
    return j;
}

Json matrix_json(const CMatrix& m) {
    Json j = Json::array();
    for (int r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
        j.push_back(row);
    }
    return j;
}

Json bound_json(const BoundReport& r) {
    Json j;
    j["lhs"] = r.lhs;
    Json terms = Json::array();
    for (const auto& t : r.rhs_terms) {
        Json e;
        e["name"] = t.first;
        e["value"] = t.second;
        terms.push_back(e);
    }
    j["rhs_terms"] = terms;
    j["rhs_total"] = r.rhs_total;
    j["gap"] = r.gap;
    j["saturated"] = r.saturated;
    if (r.w_ab) j["w_ab"] = complex_json(*r.w_ab);
    if (r.eps_a) j["eps_a"] = *r.eps_a;
    if (r.eps_b) j["eps_b"] = *r.eps_b;
    return j;
}

Json equality_json(const EqualityReport& r) {
    Json j;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["residual"] = r.residual;
    j["sign_chosen"] = r.sign_chosen;
    return j;
}

Json summary_json(const VerifySummary& s) {
    Json j;
    j["kind"] = "verify";
    j["seed"] = s.seed;
    j["samples"] = s.samples;
    j["dims"] = s.dims;
    Json props = Json::array();
    for (const PropertyResult& p : s.properties) props.push_back(property_json(p));
    j["properties"] = props;
    j["all_pass"] = s.all_pass;
    return j;
}

std::string run_fig1(const Fig1Params& p) {
    if (p.points < 2) throw bad("fig1 needs at least 2 grid points");
    const Observable a(pauli_x()), b(pauli_y());
    const PureState phi = make_qubit_state(p.omega, p.eta);
    std::string csv = "theta,rhur_lhs,rhur_rhs,strong1_rhs,strong3_lhs,strong3_rhs\n";
    for (int k = 0; k < p.points; ++k) {
        const double theta =
            p.theta_min + (p.theta_max - p.theta_min) * k / static_cast<double>(p.points - 1);
        const PureState psi = make_qubit_state(theta, p.xi);
        const BoundReport rh = rhur(a, b, psi, false);
        const BoundReport s1 = stronger_ur(a, b, psi, phi, false);
        const BoundReport s3 = stronger_ur(a, b, psi, phi, true);
        append_row(csv, {theta, rh.lhs, rh.rhs_total, s1.rhs_total, s3.lhs, s3.rhs_total});
    }
    return csv;
}

std::string run_fig2(const Fig2Params& p) {
    if (p.points < 2) throw bad("fig2 needs at least 2 grid points");
    const UnitaryOp v(pauli_z());
    CMatrix wm(2, 2);
    wm << 1, 1, Complex(0, -1), Complex(0, 1);
    const UnitaryOp wt = p.identity_wt ? UnitaryOp(CMatrix(CMatrix::Identity(2, 2)))
                                       : UnitaryOp(CMatrix(wm / std::sqrt(2.0)));
    const PureState phi1 = make_qubit_state(std::numbers::pi / 2.0, std::numbers::pi / 2.0);
    const PureState phi2 = make_qubit_state(std::numbers::pi / 4.0, std::numbers::pi / 2.0);
    std::string csv = "theta,abs_F,bong_bound,pps_bound_phi1,pps_bound_phi2,combined_bound\n";
    for (int k = 0; k < p.points; ++k) {
        const double theta =
            p.theta_min + (p.theta_max - p.theta_min) * k / static_cast<double>(p.points - 1);
        const DensityMatrix rho =
            DensityMatrix::from_pure(make_qubit_state(theta, std::numbers::pi / 11.0));
        const Complex f = otoc_value(v, wt, rho);
        const BoundReport rep = otoc_bounds(v, wt, rho, {phi1, phi2});
        append_row(csv, {theta, std::abs(f), rep.rhs_terms[0].second, rep.rhs_terms[1].second,
                         rep.rhs_terms[2].second, rep.rhs_total});
    }
    return csv;
}

Json run_obs2(const std::optional<PureState>& pre_override) {
    const double inv = 1.0 / std::sqrt(2.0);
    const Observable a(CMatrix((CMatrix::Identity(2, 2) + pauli_x()) * inv));
    const Observable b(CMatrix((pauli_z() + pauli_x()) * inv));
    const PureState pre = pre_override ? *pre_override : PureState(ket0());
    if (pre.dim() != 2) throw bad("obs2 pre must be a qubit state");

    Json j;
    j["kind"] = "obs2";
    j["a"] = matrix_json(a.matrix());
    j["b"] = matrix_json(b.matrix());
    j["pre"] = vector_json(pre.amplitudes());
    const auto common = common_zero_postselection(a, b, pre);
    if (common) {
        j["common_post_selection"] = vector_json(common->amplitudes());
        j["std_pps_a"] = std_pps(a, pre, *common);
        j["std_pps_b"] = std_pps(b, pre, *common);
        j["pps_ur"] = bound_json(pps_ur(a, b, pre, *common, true));
    } else {
        j["common_post_selection"] = nullptr;
    }

    const PureState variant(ket1());
    const auto variant_common = common_zero_postselection(a, b, variant);
    j["variant_pre"] = vector_json(variant.amplitudes());
    j["variant_common_post_selection"] =
        variant_common ? vector_json(variant_common->amplitudes()) : Json(nullptr);
    return j;
}

Scenario parse_scenario(const std::string& text) {
    const Json doc = Json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw bad("malformed JSON");
    if (!doc.is_object()) throw bad("top level must be an object");
    if (!doc.contains("version")) throw bad("missing version field");
    if (!doc.at("version").is_number_integer() || doc.at("version").get<long long>() != 1)
        throw bad("unsupported version (expected 1)");
    if (!doc.contains("kind") || !doc.at("kind").is_string())
        throw bad("missing or non-string kind field");
    const std::string kind = doc.at("kind").get<std::string>();
    const auto it = schemas().find(kind);
    if (it == schemas().end()) throw bad("unknown kind: " + kind);
    const KindSchema& schema = it->second;

    const auto allowed = [&](const std::string& key) {
        if (key == "version" || key == "kind") return true;
        for (const std::string& k : schema.required)
            if (k == key) return true;
        for (const std::string& k : schema.optional)
            if (k == key) return true;
        return false;
    };
    for (const auto& item : doc.items())
        if (!allowed(item.key()))
            throw bad("unknown field \"" + item.key() + "\" for kind " + kind);
    for (const std::string& k : schema.required)
        if (!doc.contains(k)) throw bad("kind " + kind + " requires field \"" + k + "\"");
    if (doc.contains("out") && !doc.at("out").is_string())
        throw bad("out must be a string path");
    return Scenario{kind, doc};
}

Scenario scenario_from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw bad("cannot read " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

std::string serialize_scenario(const Scenario& s) { return s.doc.dump(2) + "\n"; }

Scenario default_scenario(const std::string& kind) {
    Json doc;
    doc["version"] = 1;
    doc["kind"] = kind;
    if (kind == "search") {
        doc["objective"] = "intelligent-residual-min";
        doc["a"] = matrix_json(pauli_x());
        doc["b"] = matrix_json(pauli_y());
        doc["psi"] = vector_json(ket0());
    } else if (kind == "eval") {
        doc["relation"] = "pps_ur";
        doc["a"] = matrix_json(pauli_x());
        doc["b"] = matrix_json(pauli_y());
        doc["psi"] = vector_json(ket0());
        doc["phi"] = vector_json(CVector((ket0() + ket1()) / std::sqrt(2.0)));
    }
    return parse_scenario(doc.dump());
}

ScenarioOutcome execute_scenario(const Scenario& s) {
    const Json& doc = s.doc;
    ScenarioOutcome out;
    if (doc.contains("out")) out.out_path = doc.at("out").get<std::string>();

    if (s.kind == "fig1") {
        Fig1Params p;
        p.points = get_count(doc, "points", p.points, 2);
        p.theta_min = get_real(doc, "theta_min", p.theta_min);
        p.theta_max = get_real(doc, "theta_max", p.theta_max);
        p.omega = get_real(doc, "omega", p.omega);
        p.eta = get_real(doc, "eta", p.eta);
        p.xi = get_real(doc, "xi", p.xi);
        out.csv = run_fig1(p);
        out.is_csv = true;
    } else if (s.kind == "fig2") {
        Fig2Params p;
        p.points = get_count(doc, "points", p.points, 2);
        p.theta_min = get_real(doc, "theta_min", p.theta_min);
        p.theta_max = get_real(doc, "theta_max", p.theta_max);
        p.identity_wt = get_flag(doc, "identity_wt", false);
        out.csv = run_fig2(p);
        out.is_csv = true;
    } else if (s.kind == "obs2") {
        std::optional<PureState> pre;
        if (doc.contains("pre")) pre = parse_state(doc.at("pre"), "pre");
        out.report = run_obs2(pre);
    } else if (s.kind == "purity-demo") {
        out.report = run_purity_demo(get_seed(doc, "seed", 1), get_count(doc, "samples", 1000, 1));
        out.passed = out.report.at("all_pass").get<bool>();
    } else if (s.kind == "verify") {
        std::vector<int> dims = {2, 3, 4};
        if (doc.contains("dims")) {
            const Json& list = doc.at("dims");
            if (!list.is_array() || list.empty()) throw bad("dims must be a nonempty array");
            dims.clear();
            for (const Json& e : list) {
                if (!e.is_number_integer() || e.get<long long>() < 2)
                    throw bad("dims entries must be integers >= 2");
                dims.push_back(static_cast<int>(e.get<long long>()));
            }
        }
        const VerifySummary summary =
            run_verify(get_seed(doc, "seed", 1), get_count(doc, "samples", 1000, 1), dims);
        out.report = summary_json(summary);
        out.passed = summary.all_pass;
    } else if (s.kind == "search") {
        out.report = run_search_scenario(doc);
    } else if (s.kind == "eval") {
        const auto [report, passed] = run_eval(doc);
        out.report = report;
        out.passed = passed;
    } else {
        throw bad("unknown kind: " + s.kind);
    }
    return out;
}

} // namespace pps
