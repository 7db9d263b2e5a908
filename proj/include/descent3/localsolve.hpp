#pragma once

#include <variant>

#include "descent3/torsor.hpp"

namespace descent3 {

enum class Verdict3 { Soluble, Insoluble, Unknown };

inline const char* verdict_name(Verdict3 v) {
    switch (v) {
        case Verdict3::Soluble: return "soluble";
        case Verdict3::Insoluble: return "insoluble";
        default: return "unknown";
    }
}

struct LocalVerdict {
    Verdict3 verdict = Verdict3::Unknown;
    std::string rule;
    std::optional<std::array<Int, 3>> witness;  // solution mod p^witness_precision
    unsigned witness_precision = 0;

    bool soluble() const { return verdict == Verdict3::Soluble; }
};

struct DiagonalCubic {
    Int u1, u2, u3, c;

    Form10i form() const { return Form10i{u1, u2, u3, 0, 0, 0, 0, 0, 0, -c}; }
    std::string str() const;
};

// p-reduction (valuation moves). Either decides on the spot or returns an
// equivalent p-reduced tuple.
struct PReduceResult {
    std::optional<LocalVerdict> decided;
    DiagonalCubic reduced;
    std::vector<std::string> trace;
};
PReduceResult p_reduce(const DiagonalCubic& F, const Int& p);

// {3} u {p | u1u2u3} u {p | 27u1u2u3 - c^3}; solubility is automatic elsewhere.
std::vector<Int> bad_primes(const DiagonalCubic& F, const FactorBudget& budget = {});

// Closed-form Qp-solubility decision for u1X^3+u2Y^3+u3Z^3-cXYZ.
LocalVerdict qp_soluble(const DiagonalCubic& F, const Int& p);
LocalVerdict qp_soluble(const Rat& u1, const Rat& u2, const Rat& u3, const Rat& c, const Int& p);

struct OracleOptions {
    unsigned depth = 48;
    unsigned long node_budget = 2000000;
};

struct OracleVerdict {
    Verdict3 verdict = Verdict3::Unknown;
    std::optional<std::array<Int, 3>> witness;
    unsigned witness_precision = 0;
    unsigned depth_reached = 0;
    unsigned long nodes = 0;
};

// Breadth-first lift search over primitive solutions mod p^j with the standard
// Hensel early exit; exhaustion certifies insolubility.
OracleVerdict oracle_qp(const Form10i& F, const Int& p, const OracleOptions& opts = {});

// 3-adic Hensel lifting (standard k in {1,2}, and the strengthened variant).
// Returns a refined solution mod 3^target_precision, or nullopt when the
// hypotheses cannot be verified.
std::optional<std::array<Int, 3>> hensel3(const Form10i& F, const std::array<Int, 3>& P0, int k,
                                          bool strengthened, unsigned target_precision = 24);

struct QuadLocalOptions {
    unsigned split_precision = 12;  // starting precision for d_p
    bool oracle_fallback = true;    // use the oracle on configurations no lemma covers
    OracleOptions oracle;
};

// Qp-solubility of the Theorem-4.1 cubic attached to (E, v); dispatches on the
// splitting type of p.
LocalVerdict qp_soluble_quad(const CurveModel& E, const QuadElem& v, const Int& p,
                             const QuadLocalOptions& opts = {});

struct PrimeTrace {
    Int p;
    LocalVerdict verdict;
};

struct ElsReport {
    bool els = false;
    std::optional<Int> fails_at;
    std::vector<PrimeTrace> traces;
};

struct ElsOptions {
    bool witnesses = false;  // attach oracle witnesses to soluble verdicts
    OracleOptions oracle;
    FactorBudget budget;
};

ElsReport els_d1(const CurveModel& E, const CubeClass& u, const ElsOptions& opts = {});
ElsReport els_quad(const CurveModel& E, const QuadElem& v, const ElsOptions& opts = {});

}  // namespace descent3
