#pragma once

#include "descent3/localsolve.hpp"
#include "descent3/search.hpp"

namespace descent3 {

struct DescentOptions {
    long search_bound = 200;        // cubic global-solution search (max-norm shells)
    long point_search_bound = 300;  // naive curve point search
    ElsOptions els;
    FactorBudget budget;
};

enum class CandidateStatus { NotELS, ELSUnresolved, Global };

inline const char* status_name(CandidateStatus s) {
    switch (s) {
        case CandidateStatus::NotELS: return "not_ELS";
        case CandidateStatus::ELSUnresolved: return "ELS_unresolved";
        default: return "global";
    }
}

struct D1Candidate {
    CubeClass u;
    CandidateStatus status = CandidateStatus::ELSUnresolved;
    std::optional<Int> fails_at;
    std::optional<std::array<Int, 3>> solution;
    std::string provenance;  // how the global status was established
};

struct S3Status {
    std::vector<int> t;  // exponents over the S3 basis (orbit representative)
    QuadElem v;
    CandidateStatus status = CandidateStatus::ELSUnresolved;
    std::optional<Int> fails_at;
    std::optional<std::array<Int, 3>> solution;
    std::string provenance;
};

struct IdealCandidate {
    std::vector<int> x;  // x_i in {-1,0,1} over the split primes of f
    std::vector<int> vec;  // F3 coordinates (x_i * v_i mod 3)
    QuadIdeal ideal;
    QuadElem u;  // element with (u) = ideal * (split cube), the twisting base
    bool class_is_cube = true;  // candidates failing the class filter are excluded
    CandidateStatus status = CandidateStatus::NotELS;
    int els_twist = -1;    // index into R_S
    int global_twist = -1;  // index into R_G
    std::optional<std::array<Int, 3>> solution;
    std::string provenance;
    bool uniqueness_violation = false;
};

struct SelmerComputation {
    CurveModel curve;
    // D = 1 side
    std::vector<D1Candidate> d1_candidates;
    // D != 1 side
    unsigned s3_order = 1;
    std::vector<S3Status> s3_classes;  // orbit representatives of S3(K) \ {1}
    unsigned TS_order = 1, TG_order = 1;
    std::vector<IdealCandidate> ideal_candidates;
    unsigned sel_ideal_order = 1;
    unsigned img_ideal_order = 1;
    // common
    unsigned long sel_card = 1;
    unsigned long img_lower = 1;
    bool closure_ok = true;
    std::vector<std::string> notes;
};

std::vector<CubeClass> candidates_d1(const CurveModel& E, const FactorBudget& budget = {});

// Enumeration of the ideal candidates (steps 2-3 of the algorithm); all x-vectors
// up to conjugation/inversion, with excluded ones flagged.
std::vector<IdealCandidate> candidates_ideal(const CurveModel& E,
                                             const std::shared_ptr<const FieldK>& K,
                                             const FactorBudget& budget = {});

SelmerComputation selmer_and_image(const CurveModel& E, const DescentOptions& opts = {});

struct DescentReport {
    CurveModel curve;
    CurveModel dual;
    int delta = 0;
    SelmerComputation alpha;
    SelmerComputation alphahat;
    int r_lo = 0, r_hi = 0;
    bool sha3_hint = false;
    std::vector<std::string> annotations;
};

DescentReport rank_bounds(const CurveModel& E, const DescentOptions& opts = {});

// Tiny F3 vector space helper (row echelon over F3).
struct F3Space {
    std::vector<std::vector<int>> rows;
    bool add(std::vector<int> v);  // true if the vector enlarged the space
    bool contains(std::vector<int> v) const;
    unsigned dim() const { return static_cast<unsigned>(rows.size()); }
    unsigned long order() const;
};

}  // namespace descent3
