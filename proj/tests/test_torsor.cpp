#include "doctest.h"

#include <random>

#include "descent3/torsor.hpp"

using namespace descent3;

static CurveModel curve(long D, long a, long b) {
    return normalize_model(Rat(D), Rat(a), Rat(b)).curve;
}

TEST_CASE("build_cubic_d1") {
    CurveModel E = curve(1, 0, 7);  // y^2 = x^3 + 49, 2b = 14
    auto T = build_cubic_d1(E, split_square_cube(Rat(2)));
    CHECK(T.cubic.u1 == 1);
    CHECK(T.cubic.u2 == 2);
    CHECK(T.cubic.u3 == 7);
    CHECK(T.cubic.c == 0);

    auto T1 = build_cubic_d1(E, split_square_cube(Rat(1)));
    CHECK(T1.cubic.u3 == 14);
    CHECK(eval_form(T1.cubic.coefficients(), Rat(1), Rat(-1), Rat(0)) == 0);

    CurveModel E2 = curve(1, 0, 1);
    auto T2 = build_cubic_d1(E2, split_square_cube(Rat(4)));
    CHECK(T2.cubic.u1 == 2);
    CHECK(T2.cubic.u2 == 1);
    CHECK(T2.cubic.u3 == 1);

    CHECK_THROWS_AS(build_cubic_d1(E, split_square_cube(Rat(5))), CandidateExcludedError);
}

TEST_CASE("build_cubic_dne1 coefficients") {
    // dual of y^2 = x^3 + p^2 with p = 7: y^2 = x^3 - 27*49, D=-3, b=21
    CurveModel Ehat = curve(-3, 0, 21);
    QuadElem rho(-1, 1, Int(-3));
    auto T = build_cubic_dne1(Ehat, rho);
    Form10 F = T.coefficients();
    CHECK(F[0] == 1);       // 2 v2
    CHECK(F[1] == 3);       // 2 D v1
    CHECK(F[2] == 42);      // 2b/(v tau v) = 6p
    CHECK(F[3] == -3);      // 6 v1
    CHECK(F[5] == -9);      // 6 v2 D
    CHECK(F[4] == 0);
    CHECK(F[6] == 0);

    // v = 1 has the solution (1,0,0)
    auto T1 = build_cubic_dne1(Ehat, QuadElem::one(Int(-3)));
    CHECK(eval_form(T1.coefficients(), Rat(1), Rat(0), Rat(0)) == 0);
}

TEST_CASE("dne1 coefficients agree with the closed form at random triples") {
    std::mt19937_64 rng(3);
    for (long Dv : {-3L, -4L, 5L, -23L}) {
        CurveModel E = curve(Dv, 1, 2);
        for (int trial = 0; trial < 5; ++trial) {
            Int w1 = static_cast<long>(rng() % 20) - 10;
            Int w2 = static_cast<long>(rng() % 20) - 10;
            if ((w1 - w2 * Dv) % 2 != 0) continue;
            QuadElem v(w1, w2, Int(Dv));
            if (v.is_zero() || v.norm() == 0) continue;
            auto T = build_cubic_dne1(E, v);
            for (int i = 0; i < 100; ++i) {
                Rat X(static_cast<long>(rng() % 21) - 10);
                Rat Y(static_cast<long>(rng() % 21) - 10);
                Rat Z(static_cast<long>(rng() % 21) - 10);
                // (v(X+Y sqrt D)^3 - tau(v)(X-Y sqrt D)^3)/sqrt(D) + 2aZ(X^2-DY^2) + (2b/vtv) Z^3
                Rat v1 = Rat(v.w1) / 2, v2 = Rat(v.w2) / 2;
                Rat t1 = X * X * X + 3 * Rat(Dv) * X * Y * Y;
                Rat t2 = 3 * X * X * Y + Rat(Dv) * Y * Y * Y;
                // (v a^3 - tau(v) tau(a^3))/sqrt(D) = 2(v1 t2 + v2 t1)  [imaginary part times 2]
                Rat closed = 2 * (v1 * t2 + v2 * t1) + Rat(2 * E.a) * Z * (X * X - Rat(Dv) * Y * Y) +
                             Rat(2 * E.b) / Rat(v.norm()) * Z * Z * Z;
                CHECK(eval_form(T.coefficients(), X, Y, Z) == closed);
            }
        }
    }
}

TEST_CASE("point_from_solution_d1 worked example") {
    CurveModel E = curve(1, 0, 1);
    auto T = build_cubic_d1(E, split_square_cube(Rat(2)));
    // X^3 + 2Y^3 + Z^3 = 0 has (1,-1,1)
    REQUIRE(eval_form(T.cubic.coefficients(), Rat(1), Rat(-1), Rat(1)) == 0);
    RationalPoint P = point_from_solution_d1(T, Rat(1), Rat(-1), Rat(1));
    CHECK(P == RationalPoint::affine(Rat(2), Rat(3)));
    CHECK(alpha_d1(E, P).representative == 2);

    CHECK_THROWS_AS(point_from_solution_d1(build_cubic_d1(E, split_square_cube(Rat(1))), Rat(1),
                                           Rat(-1), Rat(0)),
                    TorsionCosetError);
}

TEST_CASE("solution_from_point round trips (D=1)") {
    CurveModel E = curve(1, 0, 11);
    auto T = build_cubic_d1(E, split_square_cube(Rat(2)));
    RationalPoint P = RationalPoint::affine(Rat(12), Rat(-43));
    REQUIRE(on_curve(E, P));
    auto sol = solution_from_point_d1(T, P);
    CHECK(eval_form(T.cubic.coefficients(), Rat(sol[0]), Rat(sol[1]), Rat(sol[2])) == 0);
    RationalPoint back = point_from_solution_d1(T, Rat(sol[0]), Rat(sol[1]), Rat(sol[2]));
    CHECK(back == P);

    // torsion solutions
    auto Tt = build_cubic_d1(E, split_square_cube(Rat(1) / Rat(22)));
    auto ts = solution_from_point_d1(Tt, RationalPoint::affine(Rat(0), Rat(11)));
    CHECK(eval_form(Tt.cubic.coefficients(), Rat(ts[0]), Rat(ts[1]), Rat(ts[2])) == 0);
}

TEST_CASE("random round trips through random solutions (D=1)") {
    // generate solutions of u1 X^3 + u2 Y^3 + u3 Z^3 - c XYZ by brute force and round trip
    std::mt19937_64 rng(8);
    int done = 0;
    while (done < 200) {
        long b = 1 + static_cast<long>(rng() % 12);
        long a = static_cast<long>(rng() % 7) - 3;
        if (4 * a * a * a == 27 * b) continue;
        CurveModel E = curve(1, a, b);
        if (E.b == 0) continue;
        // enumerate candidate pairs
        for (long u1 = 1; u1 <= 2 * b && done < 200; ++u1)
            for (long u2 = 1; u2 <= 2 * b && done < 200; ++u2) {
                if ((2 * E.b) % (u1 * u2) != 0) continue;
                CubeClass cc;
                cc.u1 = u1;
                cc.u2 = u2;
                cc.representative = u1 * u1 * u2;
                auto c2 = split_square_cube(Rat(cc.representative));
                if (c2.u1 != u1 || c2.u2 != u2) continue;  // not squarefree-coprime shape
                auto T = build_cubic_d1(E, cc);
                for (long X = -6; X <= 6; ++X)
                    for (long Y = -6; Y <= 6; ++Y)
                        for (long Z = 1; Z <= 6; ++Z) {
                            if (eval_form(T.cubic.coefficients(), Rat(X), Rat(Y), Rat(Z)) != 0)
                                continue;
                            RationalPoint P =
                                point_from_solution_d1(T, Rat(X), Rat(Y), Rat(Z));
                            auto sol = solution_from_point_d1(T, P);
                            RationalPoint Q = point_from_solution_d1(T, Rat(sol[0]), Rat(sol[1]),
                                                                     Rat(sol[2]));
                            CHECK((Q == P || Q == neg(P)));
                            ++done;
                        }
            }
    }
}

TEST_CASE("quad torsor point/solution round trip") {
    // points found by brute force on small D != 1 curves; v built from alpha
    // through the Hilbert-90 construction
    int found = 0;
    for (auto [Dv, av, bv] : std::vector<std::array<long, 3>>{
             {-3, 0, 12}, {-3, 0, 9}, {5, 0, 1}, {-4, 0, 1}, {12, 0, 1}}) {
        CurveModel E = curve(Dv, av, bv);
        auto K = FieldK::make(E.D);
        for (long xi = -20; xi <= 40; ++xi) {
            Rat rhs =
                Rat(xi * xi * xi) + Rat(E.D) * Rat(E.a * xi + E.b) * Rat(E.a * xi + E.b);
            if (rhs < 0) continue;
            Int r, rem;
            Int num(rhs.get_num());
            mpz_sqrtrem(r.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t());
            if (rem != 0 || r == 0) continue;
            RationalPoint P = RationalPoint::affine(Rat(xi), Rat(r));
            REQUIRE(on_curve(E, P));
            QuadElem al = alpha_quad(E, P);
            QuadElem v = K->hilbert90_v(al);
            auto T = build_cubic_dne1(E, v);
            auto sol = solution_from_point_quad(T, P);
            CHECK(eval_form(T.coefficients(), Rat(sol[0]), Rat(sol[1]), Rat(sol[2])) == 0);
            if (sol[2] != 0) {
                RationalPoint Q =
                    point_from_solution_quad(T, Rat(sol[0]), Rat(sol[1]), Rat(sol[2]));
                CHECK((Q == P || Q == neg(P)));
                ++found;
            }
        }
    }
    CHECK(found >= 5);
}

TEST_CASE("torsor action invariance (D=1): (X,Y,Z) -> (sX, Y/s, Z) sends u to u s^3") {
    CurveModel E = curve(1, 0, 11);
    // u = 2 has solution (1,-1,1) scaled... use the unreduced family directly:
    // solutions of u X^3 + (1/u) Y^3 + 2b Z^3 - 2a XYZ
    auto eval_u = [&](const Rat& u, const Rat& X, const Rat& Y, const Rat& Z) -> Rat {
        return u * X * X * X + Y * Y * Y / u + Rat(2 * E.b) * Z * Z * Z -
               Rat(2 * E.a) * X * Y * Z;
    };
    // point (12,-43) has y-(ax+b) = -54 = 2*(-27), so u=2, z = -3: (9, -12, -3)
    Rat u(2), X(9), Y(-12), Z(-3);
    REQUIRE(eval_u(u, X, Y, Z) == 0);
    for (Rat s : {Rat(2), Rat(3), Rat(1, 2)}) {
        CHECK(eval_u(u * s * s * s, X / s, s * Y, Z) == 0);
    }
}

TEST_CASE("torsor action invariance (D!=1): solutions transport along (X,Y,Z)->(X/s,Y/s,s^2 Z)") {
    CurveModel E = curve(-3, 0, 12);
    auto K = FieldK::make(E.D);
    RationalPoint P = RationalPoint::affine(Rat(12), Rat(36));
    REQUIRE(on_curve(E, P));
    QuadElem v = K->hilbert90_v(alpha_quad(E, P));
    auto T = build_cubic_dne1(E, v);
    auto sol = solution_from_point_quad(T, P);
    Rat X(sol[0]), Y(sol[1]), Z(sol[2]);
    REQUIRE(Z != 0);
    for (long sl : {2L, 3L}) {
        Rat s(sl);
        QuadElem vs = v.mul_int(Int(sl * sl * sl));
        auto Ts = build_cubic_dne1(E, vs);
        CHECK(eval_form(Ts.coefficients(), X / s, Y / s, s * s * Z) == 0);
    }
}

TEST_CASE("specialize_split examples") {
    // D=-3, p=7 split, v=rho
    CurveModel Ehat = curve(-3, 0, 21);  // dual of y^2=x^3+49
    QuadElem rho(-1, 1, Int(-3));
    auto T = build_cubic_dne1(Ehat, rho);
    auto S = specialize_split(T, Int(7), 10);
    Int pk;
    mpz_pow_ui(pk.get_mpz_t(), Int(7).get_mpz_t(), S.k);
    // d7 = 2 canonically; v1 = -1/2, v2 = 1/2: u1 = (-1+d)/2, u2 = (-1-d)/2 with
    // the sign rule possibly flipping d
    CHECK((S.dp * S.dp + 3) % pk == 0);
    CHECK((S.u1 * S.u2 - rho.norm()) % pk == 0);
    CHECK(S.c_exact_zero);
    // u3 = 6p * dp
    CHECK((S.u3 - Rat(Rat(2 * Ehat.b) / Rat(rho.norm())).get_num() * S.dp) % pk == 0);

    // v = 1: u1 = u2 = 1
    auto T1 = build_cubic_dne1(Ehat, QuadElem::one(Int(-3)));
    auto S1 = specialize_split(T1, Int(7), 8);
    CHECK(S1.u1 == 1);
    CHECK(S1.u2 == 1);
    CHECK(S1.prescale == 0);
}

TEST_CASE("specialize_split sign rule puts the high valuation on u2") {
    // p = m^2 + 3n^2 with p = 7: m=2, n=1: pi = 2 + sqrt(-3)
    CurveModel Ehat = curve(-3, 0, 21);
    QuadElem pi(4, 2, Int(-3));
    REQUIRE(pi.norm() == 7);
    auto T = build_cubic_dne1(Ehat, pi);
    auto S = specialize_split(T, Int(7), 10);
    CHECK(valuation(S.u1, Int(7)) == 0);
    CHECK(valuation(S.u2, Int(7)) >= 1);
    // u3 = (2b/7) d has no 7 left: 2b = 42
    CHECK(valuation(S.u3, Int(7)) == 0);
    CHECK(S.prescale == 0);
}
