#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gr2r {

// One invariant check: a stable identifier, the measured residual, and the
// threshold it must stay under (residuals are normalized so the threshold is
// meaningful per check).
struct InvariantResult {
    std::string id;
    bool passed = false;
    double residual = 0.0;
    double threshold = 0.0;
};

struct VerifyReport {
    std::vector<InvariantResult> invariants;
    std::uint64_t seed = 0;
    bool all_pass = false;
};

// Runs every library invariant (splitting, losses, additive matching,
// enumeration oracles, linear operators). Deterministic given the seed.
VerifyReport run_verify_suite(std::uint64_t seed);

// Byte-deterministic JSON rendering (sorted keys, fixed float formatting).
std::string render_verify_report(const VerifyReport& report);

}  // namespace gr2r
