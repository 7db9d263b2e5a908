#pragma once

#include <array>

#include "descent3/curve.hpp"

namespace descent3 {

struct CandidateExcludedError : ArithError {
    using ArithError::ArithError;
};
struct TorsionCosetError : ArithError {
    using ArithError::ArithError;
};

// Dense ternary cubic form, coefficient order:
// X^3, Y^3, Z^3, X^2Y, X^2Z, XY^2, Y^2Z, XZ^2, YZ^2, XYZ
using Form10 = std::array<Rat, 10>;
using Form10i = std::array<Int, 10>;

Rat eval_form(const Form10& F, const Rat& X, const Rat& Y, const Rat& Z);
Int eval_form(const Form10i& F, const Int& X, const Int& Y, const Int& Z);
// scaled to coprime integer coefficients
Form10i integer_form(const Form10& F);

// u1 X^3 + u2 Y^3 + u3 Z^3 - c XYZ
struct TernaryCubic {
    Rat u1, u2, u3, c;

    bool nondegenerate() const {
        return u1 * u2 * u3 != 0 && 27 * u1 * u2 * u3 != c * c * c;
    }
    Form10 coefficients() const;
    std::string str() const;
};

// Torsor for the class u = u1^2 u2 on a D=1 curve (reduced shape of the cubic).
struct D1Torsor {
    CurveModel E;
    CubeClass u;
    TernaryCubic cubic;  // (u1, u2, 2b/(u1 u2), 2a)
};

D1Torsor build_cubic_d1(const CurveModel& E, const CubeClass& u);

// Torsor for the class [v^2 tau(v)] on a curve with D != 1.
struct QuadTorsor {
    CurveModel E;
    QuadElem v;

    Form10 coefficients() const;
    Form10i integer_coefficients() const { return integer_form(coefficients()); }
};

QuadTorsor build_cubic_dne1(const CurveModel& E, const QuadElem& v);

// Solution (X,Y,Z) of the reduced cubic with Z != 0 -> point with alpha-class u.
RationalPoint point_from_solution_d1(const D1Torsor& T, const Rat& X, const Rat& Y, const Rat& Z);
// Point whose class equals T.u -> primitive integer solution of the reduced cubic.
std::array<Int, 3> solution_from_point_d1(const D1Torsor& T, const RationalPoint& P);

RationalPoint point_from_solution_quad(const QuadTorsor& T, const Rat& X, const Rat& Y,
                                       const Rat& Z);
std::array<Int, 3> solution_from_point_quad(const QuadTorsor& T, const RationalPoint& P);

// Split-prime specialization of the quad torsor: a diagonal cubic with p-adic
// coefficients known to precision p^k.
struct SpecializedCubic {
    Int p;
    unsigned k;     // residues are exact mod p^k
    Int u1, u2, u3, c;  // canonical representatives in [0, p^k)
    bool c_exact_zero = false;
    Int dp;         // the d_p actually used (signed per the valuation rule)
    long prescale;  // the cubic was multiplied by p^prescale to clear denominators
};

SpecializedCubic specialize_split(const QuadTorsor& T, const Int& p, unsigned k);

}  // namespace descent3
