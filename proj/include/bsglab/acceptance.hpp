#pragma once
// The artifact's acceptance gate: nine self-contained criteria with pinned
// parameters and tolerances, each reduced to a single deterministic pass/fail
// line. Criterion 9 re-runs the first eight and demands identical summaries.
#include <cstdint>
#include <string>
#include <vector>

namespace bsg {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool pass = false;
    std::string detail;     // deterministic per seed (no timing)
    double seconds = 0.0;   // informational only
};

struct AcceptanceSummary {
    std::vector<CriterionResult> results;
    bool all_pass = false;

    // One line per criterion plus an overall line; excludes timing, so two
    // runs with the same seed must produce identical text.
    std::string text() const;
};

AcceptanceSummary run_acceptance(std::uint64_t seed);

}  // namespace bsg
