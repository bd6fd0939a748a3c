// Runs the full acceptance suite and prints one PASS/FAIL line per check;
// exits nonzero if any check fails.
#include "pwkb/verify.hpp"

#include <cstdio>

int main() {
    auto results = pwkb::run_acceptance([](const pwkb::CheckResult& r) {
        std::printf("%s  %-30s %s\n", r.pass ? "PASS" : "FAIL", r.check.c_str(),
                    r.pass ? r.expected.c_str() : r.computed.c_str());
        std::fflush(stdout);
    });
    int failed = 0;
    for (const auto& r : results) failed += r.pass ? 0 : 1;
    std::printf("%d/%zu checks passed\n", (int)results.size() - failed,
                results.size());
    return failed == 0 ? 0 : 1;
}
