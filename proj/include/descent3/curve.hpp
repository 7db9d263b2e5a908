#pragma once

#include "descent3/arith.hpp"
#include "descent3/quadfield.hpp"

namespace descent3 {

struct SingularModelError : ArithError {
    using ArithError::ArithError;
};

// Normalized model y^2 = x^3 + D(ax+b)^2: D fundamental (or 1), a,b integers,
// b > 0, and gcd(a, b3) = 1 where b = b1*b3^3 with b1 cubefree.
struct CurveModel {
    Int D, a, b;
    // Weierstrass coefficients of the same equation: (a2, a4, a6) = (Da^2, 2Dab, Db^2)
    Int a2, a4, a6;

    int delta() const { return (D == 1 || D == -3) ? 1 : 0; }
    Rat discriminant() const;
    Rat j_invariant() const;
    bool operator==(const CurveModel& o) const { return D == o.D && a == o.a && b == o.b; }
    std::string str() const;
};

struct RawModel {
    Rat D, a, b;
};

struct NormalizeOutcome {
    CurveModel curve;
    // Point transport from the input model to `curve`: (x,y) -> (s^2 x, s^3 y).
    Rat scale;
};

NormalizeOutcome normalize_model(const Rat& D, const Rat& a, const Rat& b,
                                 const FactorBudget& budget = {});
inline NormalizeOutcome normalize_model(const RawModel& m) {
    return normalize_model(m.D, m.a, m.b);
}

RawModel dual_raw(const CurveModel& E);
NormalizeOutcome dual_curve(const CurveModel& E);

Rat j_of(const Rat& D, const Rat& a, const Rat& b);

struct RationalPoint {
    bool at_infinity = true;
    Rat x, y;

    static RationalPoint infinity() { return RationalPoint{}; }
    static RationalPoint affine(Rat x, Rat y) { return RationalPoint{false, std::move(x), std::move(y)}; }

    bool operator==(const RationalPoint& o) const {
        if (at_infinity || o.at_infinity) return at_infinity == o.at_infinity;
        return x == o.x && y == o.y;
    }
    // x = m/d^2, y = n/d^3 in lowest terms with d > 0.
    struct MND {
        Int m, n, d;
    };
    MND mnd() const;
    std::string str() const;
};

bool on_curve(const CurveModel& E, const RationalPoint& P);
bool on_curve_raw(const RawModel& M, const RationalPoint& P);

RationalPoint neg(const RationalPoint& P);
RationalPoint add(const CurveModel& E, const RationalPoint& P, const RationalPoint& Q);
RationalPoint sub(const CurveModel& E, const RationalPoint& P, const RationalPoint& Q);
RationalPoint mul_small(const CurveModel& E, long k, const RationalPoint& P);
// (x, y) -> (s^2 x, s^3 y)
RationalPoint transport(const RationalPoint& P, const Rat& s);

// The 3-isogeny E -> dual_curve(E) and its dual back to E.
RationalPoint isogeny_phi(const CurveModel& E, const RationalPoint& P);
RationalPoint isogeny_phihat(const CurveModel& E, const RationalPoint& Q);

struct Torsion3 {
    std::vector<RationalPoint> points;  // includes the point at infinity
    bool gamma = false;                 // 2(9b + 4a^3) is a rational cube
};
Torsion3 torsion3(const CurveModel& E);

// Descent map for D = 1: class of y - (ax+b) in Q*/Q*^3 (torsion handled per
// its defining cases).
CubeClass alpha_d1(const CurveModel& E, const RationalPoint& P, const FactorBudget& budget = {});

// Descent map representative for D != 1: the integral element
// n - d(am + b d^2) sqrt(D) representing [y - (ax+b) sqrt(D)] in K*/K*^3.
QuadElem alpha_quad(const CurveModel& E, const RationalPoint& P);

}  // namespace descent3
