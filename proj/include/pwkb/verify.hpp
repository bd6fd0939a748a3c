#pragma once
// The acceptance suite: one entry per headline check, runnable from the CLI
// (`verify-all`) and from the acceptance test binary, producing a
// machine-readable report.

#include "pwkb/geometry.hpp"

#include <functional>
#include <string>
#include <vector>

namespace pwkb {

struct CheckResult {
    std::string check;      // short identifier, e.g. "07-voros-contour"
    nlohmann::json params;  // inputs the check ran with
    std::string expected;   // human-readable expected value / property
    std::string computed;   // human-readable computed value / worst case
    double error = 0.0;     // worst measured error (0 for exact checks)
    double tol = 0.0;       // tolerance the error is compared against
    bool pass = false;

    nlohmann::json to_json() const;
};

/// Run every acceptance check in order; `progress` (when set) is invoked
/// after each check completes.
std::vector<CheckResult> run_acceptance(
    const std::function<void(const CheckResult&)>& progress = {});

inline bool all_passed(const std::vector<CheckResult>& rs) {
    for (const auto& r : rs)
        if (!r.pass) return false;
    return !rs.empty();
}

} // namespace pwkb
