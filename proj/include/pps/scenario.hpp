#pragma once

#include <numbers>
#include <optional>
#include <string>

#include "json.hpp"
#include "pps/relations.hpp"
#include "pps/states.hpp"
#include "pps/verify.hpp"

namespace pps {

using Json = nlohmann::ordered_json;

// A validated scenario document: version 1, a known kind, and only the keys
// that kind's schema allows. The raw document is kept verbatim so parse ->
// serialize -> parse is the identity.
struct Scenario {
    std::string kind;
    Json doc;
};

Scenario parse_scenario(const std::string& text);
Scenario scenario_from_file(const std::string& path);
std::string serialize_scenario(const Scenario& s);

// Minimal runnable document for each kind (fixed demo operators for search
// and eval, library defaults everywhere else).
Scenario default_scenario(const std::string& kind);

// JSON encoding conventions: complex as [re, im], vectors as lists of
// complex, matrices as row-major lists of rows.
Json complex_json(const Complex& z);
Json vector_json(const CVector& v);
Json matrix_json(const CMatrix& m);
Json bound_json(const BoundReport& r);
Json equality_json(const EqualityReport& r);
Json summary_json(const VerifySummary& s);

struct Fig1Params {
    int points = 721;
    double theta_min = -std::numbers::pi;
    double theta_max = std::numbers::pi;
    double omega = std::numbers::pi / 3.0;
    double eta = std::numbers::pi / 5.0;
    double xi = 0.0;
};

struct Fig2Params {
    int points = 721;
    double theta_min = -std::numbers::pi;
    double theta_max = std::numbers::pi;
    bool identity_wt = false;
};

// Product-bound curves for sigma_x/sigma_y against a theta-swept qubit
// pre-selection: columns theta, rhur_lhs, rhur_rhs, strong1_rhs,
// strong3_lhs, strong3_rhs ("%.12g", LF, bit-stable).
std::string run_fig1(const Fig1Params& p);

// Correlator modulus against its upper bounds for a theta-swept qubit:
// columns theta, abs_F, bong_bound, pps_bound_phi1, pps_bound_phi2,
// combined_bound.
std::string run_fig2(const Fig2Params& p);

// The fixed common-zero instance report, plus the pre-selection variant
// whose common post-selection does not exist.
Json run_obs2(const std::optional<PureState>& pre = std::nullopt);

struct ScenarioOutcome {
    Json report;          // JSON-reporting kinds
    std::string csv;      // fig1/fig2
    bool is_csv = false;
    bool passed = true;   // false on property failure (verify/purity-demo/eval)
    std::string out_path; // resolved "out" field; empty means stdout
};

// Runs a validated scenario. Content-level problems (non-Hermitian operator
// literals, dimension mismatches, undefined quantities) surface as
// ScenarioError.
ScenarioOutcome execute_scenario(const Scenario& s);

} // namespace pps
