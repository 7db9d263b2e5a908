#pragma once

#include <optional>

#include "descent3/torsor.hpp"

namespace descent3 {

struct SearchOutcome {
    std::optional<std::array<Int, 3>> found;  // primitive, first nonzero coordinate > 0
    long bound_used = 0;
    bool exhausted = false;
};

// Deterministic sweep over primitive integer triples with max|coordinate| <= bound,
// in increasing max-norm shells; the minimal witness is returned.
SearchOutcome search_cubic(const Form10i& F, long bound);

// All integer roots of A z^3 + B z^2 + C z + E = 0 in [lo, hi].
std::vector<Int> cubic_integer_roots(const Int& A, const Int& B, const Int& C, const Int& E,
                                     const Int& lo, const Int& hi);

// All affine points with x = m/d^2, |m| <= bound, d^2 <= bound, verified exactly.
std::vector<RationalPoint> search_curve_points(const CurveModel& E, long bound);

}  // namespace descent3
