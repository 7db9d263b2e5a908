#include "descent3/torsor.hpp"

#include <algorithm>
#include <sstream>

namespace descent3 {

Rat eval_form(const Form10& F, const Rat& X, const Rat& Y, const Rat& Z) {
    return F[0] * X * X * X + F[1] * Y * Y * Y + F[2] * Z * Z * Z + F[3] * X * X * Y +
           F[4] * X * X * Z + F[5] * X * Y * Y + F[6] * Y * Y * Z + F[7] * X * Z * Z +
           F[8] * Y * Z * Z + F[9] * X * Y * Z;
}

Int eval_form(const Form10i& F, const Int& X, const Int& Y, const Int& Z) {
    return F[0] * X * X * X + F[1] * Y * Y * Y + F[2] * Z * Z * Z + F[3] * X * X * Y +
           F[4] * X * X * Z + F[5] * X * Y * Y + F[6] * Y * Y * Z + F[7] * X * Z * Z +
           F[8] * Y * Z * Z + F[9] * X * Y * Z;
}

Form10i integer_form(const Form10& F) {
    Int lcm = 1;
    for (const auto& f : F) lcm = lcm / gcd(lcm, Int(f.get_den())) * Int(f.get_den());
    Form10i out;
    Int content = 0;
    for (size_t i = 0; i < 10; ++i) {
        Rat scaled = F[i] * Rat(lcm);
        out[i] = Int(scaled.get_num());
        content = gcd(content, out[i]);
    }
    if (content > 1)
        for (auto& v : out) v /= content;
    return out;
}

Form10 TernaryCubic::coefficients() const {
    Form10 F{};
    F[0] = u1;
    F[1] = u2;
    F[2] = u3;
    F[9] = -c;
    return F;
}

std::string TernaryCubic::str() const {
    std::ostringstream os;
    os << "(" << u1.get_str() << ")X^3 + (" << u2.get_str() << ")Y^3 + (" << u3.get_str()
       << ")Z^3 - (" << c.get_str() << ")XYZ";
    return os.str();
}

D1Torsor build_cubic_d1(const CurveModel& E, const CubeClass& u) {
    if (E.D != 1) throw ArithError("build_cubic_d1: curve has D != 1");
    Int u1u2 = u.u1 * u.u2;
    if ((2 * E.b) % u1u2 != 0)
        throw CandidateExcludedError("candidate excluded: u1 u2 does not divide 2b");
    TernaryCubic c{Rat(u.u1), Rat(u.u2), Rat(2 * E.b / u1u2), Rat(2 * E.a)};
    return D1Torsor{E, u, c};
}

QuadTorsor build_cubic_dne1(const CurveModel& E, const QuadElem& v) {
    if (E.D == 1) throw ArithError("build_cubic_dne1: curve has D = 1");
    if (v.D != E.D) throw ArithError("build_cubic_dne1: v lives in the wrong field");
    if (v.is_zero() || v.norm() == 0) throw ArithError("build_cubic_dne1: v tau(v) = 0");
    return QuadTorsor{E, v};
}

Form10 QuadTorsor::coefficients() const {
    // 2v2 X^3 + 2Dv1 Y^3 + (2b/(v1^2-Dv2^2)) Z^3 + 6v1 X^2Y + 6v2 D XY^2 + 2a X^2Z - 2aD Y^2Z
    const Int& D = E.D;
    Rat v1 = Rat(v.w1) / 2, v2 = Rat(v.w2) / 2;
    Form10 F{};
    F[0] = 2 * v2;
    F[1] = 2 * Rat(D) * v1;
    F[2] = Rat(2 * E.b) / Rat(v.norm());
    F[3] = 6 * v1;
    F[4] = Rat(2 * E.a);
    F[5] = 6 * v2 * Rat(D);
    F[6] = Rat(-2 * E.a * D);
    return F;
}

RationalPoint point_from_solution_d1(const D1Torsor& T, const Rat& X, const Rat& Y,
                                     const Rat& Z) {
    if (Z == 0) throw TorsionCosetError("torsion coset, no affine preimage");
    if (eval_form(T.cubic.coefficients(), X, Y, Z) != 0)
        throw ArithError("point_from_solution_d1: not a solution");
    Rat u(T.u.representative);
    Rat Yu = Y * Rat(T.u.u1 * T.u.u2);  // unscale to the u X^3 + (1/u) Y^3 + ... model
    Rat x = -X * Yu / (Z * Z);
    Rat y = (u * X * X * X - Yu * Yu * Yu / u) / (2 * Z * Z * Z);
    RationalPoint P = RationalPoint::affine(x, y);
    if (!on_curve(T.E, P)) throw ArithError("point_from_solution_d1: image not on curve");
    return P;
}

namespace {

std::array<Int, 3> primitive_triple(const Rat& X, const Rat& Y, const Rat& Z) {
    Int l = 1;
    for (const Rat& t : {X, Y, Z}) l = l / gcd(l, Int(t.get_den())) * Int(t.get_den());
    Int a(Rat(X * l).get_num()), b(Rat(Y * l).get_num()), c(Rat(Z * l).get_num());
    Int g = gcd(gcd(a, b), c);
    if (g > 1) {
        a /= g;
        b /= g;
        c /= g;
    }
    // canonical sign: first nonzero coordinate positive
    Int lead = a != 0 ? a : (b != 0 ? b : c);
    if (lead < 0) {
        a = -a;
        b = -b;
        c = -c;
    }
    return {a, b, c};
}

}  // namespace

std::array<Int, 3> solution_from_point_d1(const D1Torsor& T, const RationalPoint& P) {
    const CurveModel& E = T.E;
    Rat u1u2(T.u.u1 * T.u.u2);
    if (P.at_infinity) {
        if (!T.u.is_trivial())
            throw ArithError("solution_from_point_d1: infinity maps to the unit class only");
        return primitive_triple(Rat(1), Rat(-1), Rat(0));
    }
    if (P.x == 0) {
        // torsion points: solve with X = 0 (class 1/(2b)) or Y = 0 (class 2b)
        if (P.y == Rat(E.b)) {
            Rat q = -T.cubic.u3 / T.cubic.u2;
            if (!is_perfect_cube(q))
                throw ArithError("solution_from_point_d1: class mismatch at T");
            Int yn = *exact_cbrt(Int(q.get_num()));
            Int yd = *exact_cbrt(Int(q.get_den()));
            return primitive_triple(Rat(0), Rat(yn) / Rat(yd), Rat(1));
        }
        Rat q = -T.cubic.u3 / T.cubic.u1;
        if (!is_perfect_cube(q)) throw ArithError("solution_from_point_d1: class mismatch at -T");
        Int xn = *exact_cbrt(Int(q.get_num()));
        Int xd = *exact_cbrt(Int(q.get_den()));
        return primitive_triple(Rat(xn) / Rat(xd), Rat(0), Rat(1));
    }
    Rat w = (P.y - (Rat(E.a) * P.x + Rat(E.b))) / Rat(T.u.representative);
    if (!is_perfect_cube(w)) throw ArithError("solution_from_point_d1: point class != u");
    Rat z = Rat(*exact_cbrt(Int(w.get_num()))) / Rat(*exact_cbrt(Int(w.get_den())));
    // (z^2, -x, z) solves the u-model; rescale Y by 1/(u1u2) for the reduced model
    auto sol = primitive_triple(z * z, -P.x / u1u2, z);
    if (eval_form(T.cubic.coefficients(), Rat(sol[0]), Rat(sol[1]), Rat(sol[2])) != 0)
        throw ArithError("solution_from_point_d1: produced non-solution (internal)");
    return sol;
}

RationalPoint point_from_solution_quad(const QuadTorsor& T, const Rat& X, const Rat& Y,
                                       const Rat& Z) {
    if (Z == 0) throw TorsionCosetError("torsion coset, no affine preimage");
    if (eval_form(T.coefficients(), X, Y, Z) != 0)
        throw ArithError("point_from_solution_quad: not a solution");
    const Int& D = T.E.D;
    Rat nv(T.v.norm());
    Rat x = nv * (X * X - Rat(D) * Y * Y) / (Z * Z);
    // y = v tau(v) Re(v (X + Y sqrt(D))^3)/Z^3, with exact rational X, Y
    // compute v (X+Y sqrt D)^3 over Q(sqrt D) with rational coordinates
    Rat c1(T.v.w1), c2(T.v.w2);  // v = (c1 + c2 sqrt D)/2
    Rat s1 = X, s2 = Y;
    // (s1 + s2 sqrt D)^3
    Rat t1 = s1 * s1 * s1 + 3 * Rat(D) * s1 * s2 * s2;
    Rat t2 = 3 * s1 * s1 * s2 + Rat(D) * s2 * s2 * s2;
    // times v: real part (c1 t1 + c2 t2 D)/2
    Rat re = (c1 * t1 + c2 * t2 * Rat(D)) / 2;
    Rat y = nv * re / (Z * Z * Z);
    RationalPoint P = RationalPoint::affine(x, y);
    if (!on_curve(T.E, P)) throw ArithError("point_from_solution_quad: image not on curve");
    return P;
}

std::array<Int, 3> solution_from_point_quad(const QuadTorsor& T, const RationalPoint& P) {
    if (P.at_infinity) {
        // unit class: the solution (1, 0, 0) (a torsion-coset representative)
        return {1, 0, 0};
    }
    const Int& D = T.E.D;
    auto [m, n, d] = P.mnd();
    QuadElem num(2 * n, -2 * d * (T.E.a * m + T.E.b * d * d), D);  // d^3 (y - (ax+b) sqrt D)
    QuadElem v2tv = T.v * T.v * T.v.conj();
    QuadElem A = num * v2tv.conj();
    Int mden = d * d * d * v2tv.norm();
    // w = A/mden must be z^3; then z = cbrt(A * mden^2)/mden
    auto root = exact_cbrt_in_K(A * QuadElem::integer(mden * mden, D));
    if (!root) throw ArithError("solution_from_point_quad: point class != [v^2 tau v]");
    Rat z1 = Rat(root->w1) / Rat(2 * mden), z2 = Rat(root->w2) / Rat(2 * mden);
    auto sol = primitive_triple(z1, z2, Rat(1));
    if (eval_form(T.coefficients(), Rat(sol[0]), Rat(sol[1]), Rat(sol[2])) != 0)
        throw ArithError("solution_from_point_quad: produced non-solution (internal)");
    return sol;
}

SpecializedCubic specialize_split(const QuadTorsor& T, const Int& p, unsigned k) {
    const Int& D = T.E.D;
    Int nv = T.v.norm();
    long t = valuation(nv, p);
    long vb = valuation(Int(2 * T.E.b), p);
    long prescale = std::max(0L, t - vb);
    unsigned kmin = static_cast<unsigned>(t + vb + prescale) + 6;
    if (k < kmin) k = kmin;

    Int pk;
    mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), k);
    Int d = padic_sqrt(D, p, k + 1);
    Int pk1 = (p == 2) ? 2 * pk : pk;

    auto halve = [&](const Int& w) -> Int {
        // (w)/2 mod p^k for w = w1 +- w2 d computed mod p^(k+1)-ish
        if (p == 2) {
            if (w % 2 != 0) throw ArithError("specialize_split: non-integral coefficient");
            return mod_positive(w / 2, pk);
        }
        return mod_positive(w * mod_inverse(2, pk), pk);
    };
    Int u1p = halve(mod_positive(T.v.w1 + T.v.w2 * d, pk1));
    Int u2m = halve(mod_positive(T.v.w1 - T.v.w2 * d, pk1));
    // choose the sign of d so that v_p(v1 - v2 d) is maximal
    auto vp_capped = [&](const Int& x) -> long {
        if (x == 0) return static_cast<long>(k);
        long v = valuation(x, p);
        return std::min<long>(v, k);
    };
    Int dp = d;
    Int u1 = u1p, u2 = u2m;
    if (vp_capped(u1p) > vp_capped(u2m)) {
        dp = mod_positive(-d, pk1);
        u1 = u2m;
        u2 = u1p;
    }
    if (vp_capped(u1) != 0)
        throw ArithError("specialize_split: both specializations vanish mod p (internal)");
    // u3 = (2b / nv) d, prescaled by p^prescale
    Int B1(Rat(Rat(2 * T.E.b) / Rat(nv)).get_num());
    Int B2(Rat(Rat(2 * T.E.b) / Rat(nv)).get_den());
    long tB2 = valuation(B2, p);
    Int pB2;
    mpz_pow_ui(pB2.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(tB2));
    Int B2u = B2 / pB2;
    if (tB2 != prescale) throw ArithError("specialize_split: prescale mismatch (internal)");
    Int u3 = mod_positive(B1 * dp % pk * mod_inverse(B2u, pk), pk);

    Int psc;
    mpz_pow_ui(psc.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(prescale));
    SpecializedCubic out;
    out.p = p;
    out.k = k;
    out.u1 = mod_positive(u1 * psc, pk);
    out.u2 = mod_positive(u2 * psc, pk);
    out.u3 = u3;
    out.c_exact_zero = (T.E.a == 0);
    out.c = out.c_exact_zero ? Int(0) : mod_positive(2 * T.E.a * dp * psc, pk);
    out.dp = mod_positive(dp, pk);
    out.prescale = prescale;
    return out;
}

}  // namespace descent3
