#include "descent3/curve.hpp"

#include <set>
#include <sstream>

namespace descent3 {

namespace {

Rat rat_pow(const Rat& x, unsigned e) {
    Rat r = 1;
    for (unsigned i = 0; i < e; ++i) r *= x;
    return r;
}

long rat_val(const Rat& x, const Int& p) { return valuation(x, p); }

}  // namespace

Rat CurveModel::discriminant() const {
    return Rat(16) * rat_pow(Rat(b), 3) * Rat(D * D) * Rat(4 * D * a * a * a - 27 * b);
}

Rat CurveModel::j_invariant() const { return j_of(Rat(D), Rat(a), Rat(b)); }

std::string CurveModel::str() const {
    std::ostringstream os;
    os << "y^2 = x^3 + " << D.get_str() << "*(" << a.get_str() << "x+" << b.get_str() << ")^2";
    return os.str();
}

Rat j_of(const Rat& D, const Rat& a, const Rat& b) {
    Rat a2 = D * a * a, a4 = 2 * D * a * b, a6 = D * b * b;
    Rat b2 = 4 * a2, b4 = 2 * a4, b6 = 4 * a6;
    Rat c4 = b2 * b2 - 24 * b4;
    Rat c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6;
    Rat disc = (c4 * c4 * c4 - c6 * c6) / 1728;
    if (disc == 0) throw SingularModelError("j_of: singular model");
    return c4 * c4 * c4 / disc;
}

NormalizeOutcome normalize_model(const Rat& Din, const Rat& ain, const Rat& bin,
                                 const FactorBudget& budget) {
    if (Din == 0 || bin == 0) throw SingularModelError("normalize: D and b must be nonzero");
    if (4 * Din * rat_pow(ain, 3) == 27 * bin) throw SingularModelError("normalize: 4Da^3 = 27b");

    auto [D, f] = fundamental_discriminant_of(Din, budget);
    Rat ap = f * ain, bp = f * bin;

    // Per-prime exponent of the scaling t: (a,b) -> (t a, t^3 b).
    std::set<Int> primes;
    auto collect = [&](const Int& n) {
        if (n == 0 || n == 1 || n == -1) return;
        for (const auto& [p, e] : factor(n, budget).factors) {
            (void)e;
            primes.insert(p);
        }
    };
    collect(Int(ap.get_num()));
    collect(Int(ap.get_den()));
    collect(Int(bp.get_num()));
    collect(Int(bp.get_den()));

    Rat t = 1;
    for (const Int& p : primes) {
        long vb = rat_val(bp, p);
        long e;
        if (ap == 0) {
            // only the b-constraints bind; drop full cubes out of b
            e = -(vb >= 0 ? vb / 3 : (vb - 2) / 3);
        } else {
            long va = rat_val(ap, p);
            long eb = -(vb >= 0 ? vb / 3 : (vb - 2) / 3);  // ceil(-vb/3)
            e = std::max(-va, eb);
        }
        Rat pe;
        if (e >= 0) {
            Int pw;
            mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e));
            pe = Rat(pw);
        } else {
            Int pw;
            mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(-e));
            pe = Rat(1) / Rat(pw);
        }
        t *= pe;
    }
    Rat A = t * ap, B = rat_pow(t, 3) * bp;
    Rat scale = t;
    if (B < 0) {
        A = -A;
        B = -B;
        scale = -scale;
    }
    if (A.get_den() != 1 || B.get_den() != 1)
        throw ArithError("normalize: internal non-integral result");

    CurveModel E;
    E.D = D;
    E.a = Int(A.get_num());
    E.b = Int(B.get_num());
    E.a2 = E.D * E.a * E.a;
    E.a4 = 2 * E.D * E.a * E.b;
    E.a6 = E.D * E.b * E.b;
    return NormalizeOutcome{E, scale};
}

RawModel dual_raw(const CurveModel& E) {
    return RawModel{Rat(-3 * E.D), Rat(E.a), Rat(27 * E.b - 4 * E.a * E.a * E.a * E.D) / 9};
}

NormalizeOutcome dual_curve(const CurveModel& E) { return normalize_model(dual_raw(E)); }

RationalPoint::MND RationalPoint::mnd() const {
    if (at_infinity) throw ArithError("mnd: point at infinity");
    Int xd(x.get_den()), yd(y.get_den());
    Int d, rem;
    mpz_sqrtrem(d.get_mpz_t(), rem.get_mpz_t(), xd.get_mpz_t());
    if (rem != 0 || yd != d * d * d)
        throw ArithError("mnd: point is not in x=m/d^2, y=n/d^3 shape");
    return MND{Int(x.get_num()), Int(y.get_num()), d};
}

std::string RationalPoint::str() const {
    if (at_infinity) return "O";
    std::ostringstream os;
    os << "(" << x.get_str() << ", " << y.get_str() << ")";
    return os.str();
}

bool on_curve(const CurveModel& E, const RationalPoint& P) {
    if (P.at_infinity) return true;
    Rat lhs = P.y * P.y;
    Rat ax_b = Rat(E.a) * P.x + Rat(E.b);
    Rat rhs = rat_pow(P.x, 3) + Rat(E.D) * ax_b * ax_b;
    return lhs == rhs;
}

bool on_curve_raw(const RawModel& M, const RationalPoint& P) {
    if (P.at_infinity) return true;
    Rat ax_b = M.a * P.x + M.b;
    return P.y * P.y == rat_pow(P.x, 3) + M.D * ax_b * ax_b;
}

RationalPoint neg(const RationalPoint& P) {
    if (P.at_infinity) return P;
    return RationalPoint::affine(P.x, -P.y);
}

RationalPoint add(const CurveModel& E, const RationalPoint& P, const RationalPoint& Q) {
    if (P.at_infinity) return Q;
    if (Q.at_infinity) return P;
    Rat a2(E.a2), a4(E.a4);
    Rat lambda;
    if (P.x == Q.x) {
        if (P.y != Q.y || P.y == 0) return RationalPoint::infinity();
        lambda = (3 * P.x * P.x + 2 * a2 * P.x + a4) / (2 * P.y);
    } else {
        lambda = (Q.y - P.y) / (Q.x - P.x);
    }
    Rat x3 = lambda * lambda - a2 - P.x - Q.x;
    Rat y3 = lambda * (P.x - x3) - P.y;
    return RationalPoint::affine(x3, y3);
}

RationalPoint sub(const CurveModel& E, const RationalPoint& P, const RationalPoint& Q) {
    return add(E, P, neg(Q));
}

RationalPoint mul_small(const CurveModel& E, long k, const RationalPoint& P) {
    if (k < 0) return mul_small(E, -k, neg(P));
    RationalPoint R = RationalPoint::infinity();
    for (long i = 0; i < k; ++i) R = add(E, R, P);
    return R;
}

RationalPoint transport(const RationalPoint& P, const Rat& s) {
    if (P.at_infinity) return P;
    return RationalPoint::affine(s * s * P.x, s * s * s * P.y);
}

namespace {

// The raw isogeny formulas on y^2 = x^3 + D(ax+b)^2; image lies on the raw dual.
RationalPoint phi_raw(const Rat& D, const Rat& a, const Rat& b, const RationalPoint& P) {
    if (P.at_infinity || P.x == 0) return RationalPoint::infinity();
    const Rat& x = P.x;
    const Rat& y = P.y;
    Rat xx = x * x;
    Rat xhat = (x * xx + 4 * D * ((a * a / 3) * xx + a * b * x + b * b)) / xx;
    Rat yhat = y * (x * xx - 4 * D * b * (a * x + 2 * b)) / (x * xx);
    return RationalPoint::affine(xhat, yhat);
}

}  // namespace

RationalPoint isogeny_phi(const CurveModel& E, const RationalPoint& P) {
    RationalPoint raw = phi_raw(Rat(E.D), Rat(E.a), Rat(E.b), P);
    NormalizeOutcome dual = dual_curve(E);
    return transport(raw, dual.scale);
}

RationalPoint isogeny_phihat(const CurveModel& E, const RationalPoint& Q) {
    NormalizeOutcome dual = dual_curve(E);
    RationalPoint qraw = transport(Q, 1 / dual.scale);
    RawModel M = dual_raw(E);
    RationalPoint r = phi_raw(M.D, M.a, M.b, qraw);
    if (r.at_infinity) return r;
    // the dual direction carries the extra division by 9 and 27
    return RationalPoint::affine(r.x / 9, r.y / 27);
}

Torsion3 torsion3(const CurveModel& E) {
    Torsion3 out;
    out.points.push_back(RationalPoint::infinity());
    Int w = 2 * (9 * E.b + 4 * E.a * E.a * E.a);
    out.gamma = is_perfect_cube(w);
    if (E.D == 1) {
        out.points.push_back(RationalPoint::affine(Rat(0), Rat(E.b)));
        out.points.push_back(RationalPoint::affine(Rat(0), Rat(-E.b)));
        return out;
    }
    if (E.D == -3) {
        auto t0 = exact_cbrt(w);
        if (t0 && *t0 != 0) {
            Rat t(*t0);
            Rat a(E.a), b(E.b);
            Rat x = t * t / 3 + (3 / (t * t)) * (4 * a * b + Rat(16) / 9 * a * a * a * a) +
                    4 * a * a / 3;
            // y^2 = -(D/3)(ax+3b)^2 = (ax+3b)^2 on this branch
            Rat y = a * x + 3 * b;
            RationalPoint P = RationalPoint::affine(x, y);
            if (!on_curve(E, P)) P = RationalPoint::affine(x, -y);
            if (on_curve(E, P) && mul_small(E, 3, P).at_infinity && !P.at_infinity && P.y != 0) {
                out.points.push_back(P);
                out.points.push_back(neg(P));
            }
        }
    }
    return out;
}

CubeClass alpha_d1(const CurveModel& E, const RationalPoint& P, const FactorBudget& budget) {
    if (E.D != 1) throw ArithError("alpha_d1: curve has D != 1");
    if (P.at_infinity) return split_square_cube(Rat(1), budget);
    if (P.x == 0 && P.y == Rat(E.b)) return split_square_cube(Rat(1) / Rat(2 * E.b), budget);
    Rat v = P.y - (Rat(E.a) * P.x + Rat(E.b));
    if (v == 0) throw ArithError("alpha_d1: unexpected zero (point should be the torsion point)");
    return split_square_cube(v, budget);
}

QuadElem alpha_quad(const CurveModel& E, const RationalPoint& P) {
    if (E.D == 1) throw ArithError("alpha_quad: curve has D = 1");
    if (P.at_infinity) return QuadElem::one(E.D);
    auto [m, n, d] = P.mnd();
    Int w2 = -2 * d * (E.a * m + E.b * d * d);
    return QuadElem(2 * n, w2, E.D);
}

}  // namespace descent3
