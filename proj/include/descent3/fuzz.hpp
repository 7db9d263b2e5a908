#pragma once

#include "descent3/localsolve.hpp"

namespace descent3 {

// Differential test harness: closed-form local solubility against the oracle.
struct FuzzConfig {
    unsigned per_prime = 1000;  // diagonal cubics per prime in {2,3,5,7,11,13}
    unsigned quad_total = 300;  // (curve, v, p) triples across D in {-3,-4,5,12,-23}
    unsigned long seed = 20240809;
    long coeff_span = 50;
    OracleOptions oracle;
    int jobs = 1;
};

struct FuzzResult {
    unsigned long diag_cases = 0, diag_unknown = 0;
    unsigned long quad_cases = 0, quad_unknown = 0;
    std::vector<std::string> disagreements;

    bool ok() const { return disagreements.empty(); }
};

FuzzResult fuzz_differential(const FuzzConfig& cfg);

}  // namespace descent3
