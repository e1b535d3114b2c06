#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pmuobs/report.hpp"

namespace pmuobs {

// Outcome of one randomized certificate suite. Checks reuse the trajectory
// CheckResult semantics: `worst` is the largest deviation observed across all
// samples, on the scale the check documents.
struct VerifyResult {
    std::string suite;
    int samples = 0;
    std::uint64_t seed = 0;
    double range = 0.0;
    std::vector<CheckResult> checks;
    bool passed() const;
};

// Randomized certificate that the reduced output map has a singular Jacobian
// everywhere: draws (v, y2) with components uniform in [-range, range] and
// checks the annihilated direction (1, -v3, v2), the determinant bound
// |det| <= 1e-10 (1 + ||J||^3), and, on the first 100 draws, the analytic
// Jacobian against central finite differences.
VerifyResult verify_lemma1(int samples = 10000, std::uint64_t seed = 12345,
                           double range = 10.0);

// Randomized certificate of the 5x5 adjugate algebra behind the mixing step:
// adj(M) M = det(M) I on random matrices, agreement of the adjugate and
// determinant-replacement routes on random (M, b), and exactness at the
// identity matrix.
VerifyResult verify_drem(int samples = 1000, std::uint64_t seed = 12345,
                         double range = 1.0);

// Header plus one line per check; stable text format for scripting.
std::string verify_summary(const VerifyResult& r);

}  // namespace pmuobs
