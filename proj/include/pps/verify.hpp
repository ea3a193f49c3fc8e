#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pps {

// One randomized property sweep. failures counts tolerance violations (or
// violated scenario-level rate requirements); worst is the most extreme
// margin observed, with its meaning spelled out in detail.
struct PropertyResult {
    std::string name;
    int samples = 0;
    int failures = 0;
    double worst = 0.0;
    std::string detail;
    bool passed = false;
};

struct VerifySummary {
    std::uint64_t seed = 0;
    int samples = 0;
    std::vector<int> dims;
    std::vector<PropertyResult> properties;
    bool all_pass = false;
};

// Seeded sweep over every library-level invariant: reduction to the
// standard deviation, basis-completion identity, exact decompositions,
// weak-deviation dominance, bound soundness, certified saturation, purity
// detection, and the estimation identities. Budgets per property scale off
// the samples argument (soundness gets the full count, the costlier suites
// a fixed fraction). Identical inputs produce identical summaries.
VerifySummary run_verify(std::uint64_t seed, int samples, const std::vector<int>& dims);

} // namespace pps
