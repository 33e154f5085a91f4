#pragma once

#include <string>
#include <vector>

namespace soilctl {

struct PropertyResult {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

// Runs the oracle suites (factorization identity, null row, Q equivalence,
// ARE residual / cross-solver agreement, scalar closed forms, MMS order,
// steady-state preservation, reproducibility). `filter` is a substring match
// on property names; empty runs everything.
std::vector<PropertyResult> run_verification(const std::string& filter = "");

} // namespace soilctl
