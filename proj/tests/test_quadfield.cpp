#include "doctest.h"

#include <random>

#include "descent3/quadfield.hpp"

using namespace descent3;

static QuadElem random_elem(std::mt19937_64& rng, const Int& D, long span = 40) {
    for (;;) {
        Int w1 = static_cast<long>(rng() % (2 * span)) - span;
        Int w2 = static_cast<long>(rng() % (2 * span)) - span;
        if ((w1 - w2 * D) % 2 != 0) continue;
        QuadElem x(w1, w2, D);
        if (!x.is_zero()) return x;
    }
}

TEST_CASE("element arithmetic and norms") {
    Int D = -3;
    QuadElem rho(-1, 1, D);
    CHECK(rho.norm() == 1);
    CHECK((rho * rho * rho) == QuadElem::one(D));
    CHECK(rho.conj() == rho * rho * (-QuadElem::one(D)) * (-QuadElem::one(D)));  // tau(rho) = rho^2

    std::mt19937_64 rng(7);
    for (long Dv : {-3L, -4L, 5L, 12L, -23L}) {
        Int Dd(Dv);
        for (int i = 0; i < 500; ++i) {
            QuadElem x = random_elem(rng, Dd);
            QuadElem y = random_elem(rng, Dd);
            CHECK((x * y).norm() == x.norm() * y.norm());
            CHECK(x.norm() == (x * x.conj()).rational_value());
            auto [u, v] = x.omega_coords();
            CHECK(QuadElem::from_omega(u, v, Dd) == x);
        }
    }
}

TEST_CASE("content and primitivity") {
    Int D = -3;
    QuadElem x(4, 0, D);  // the integer 2
    CHECK(x.content() == 2);
    QuadElem y(1, 1, D);  // (1+sqrt(-3))/2, a unit times ...
    CHECK(y.content() == 1);
    QuadElem z(2, 4, D);  // (2+4s)/2 = 1+2s: dividing by 2 breaks integrality
    CHECK(z.content() == 1);
    QuadElem w(4, 8, D);
    CHECK(w.content() == 2);
}

TEST_CASE("ideal HNF basics") {
    Int D = -3;
    QuadElem s3 = QuadElem::sqrtD(D);  // sqrt(-3)
    QuadIdeal p3 = QuadIdeal::from_element(s3);
    CHECK(p3.norm() == 3);
    QuadIdeal three = QuadIdeal::from_element(QuadElem::integer(3, D));
    CHECK(p3 * p3 == three);
    CHECK(p3.conj() == p3);

    QuadElem x(4, 2, D);  // 2 + sqrt(-3), norm 7
    CHECK(x.norm() == 7);
    QuadIdeal p7 = QuadIdeal::from_element(x);
    CHECK(p7.norm() == 7);
    CHECK((p7 * p7.conj()).norm() == 49);
    CHECK(p7.contains(x));
    CHECK_FALSE(p7.contains(QuadElem::one(D)));
}

TEST_CASE("splitting types match root counting") {
    for (long Dv : {-3L, -4L, 5L, 12L, -23L, 8L, -7L}) {
        auto K = FieldK::make(Int(Dv));
        Int p = 2;
        while (p < 500) {
            auto st = K->splitting_type(p);
            // count roots of x^2 - D mod p (p odd), i.e. Kronecker directly
            int kr = kronecker(Int(Dv), p);
            if (kr == 1) {
                CHECK(st.type == SplitType::Split);
                CHECK(st.prime->norm() == p);
                CHECK((*st.prime * st.prime->conj()) ==
                      QuadIdeal::from_element(QuadElem::integer(p, Int(Dv))));
            } else if (kr == -1) {
                CHECK(st.type == SplitType::Inert);
            } else {
                CHECK(st.type == SplitType::Ramified);
                CHECK((*st.prime * *st.prime) ==
                      QuadIdeal::from_element(QuadElem::integer(p, Int(Dv))));
            }
            mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
        }
    }
    auto K3 = FieldK::make(Int(-3));
    CHECK(K3->splitting_type(7).type == SplitType::Split);
    CHECK(K3->splitting_type(5).type == SplitType::Inert);
    CHECK(K3->splitting_type(3).type == SplitType::Ramified);
}

TEST_CASE("class numbers") {
    CHECK(FieldK::make(Int(-3))->class_number() == 1);
    CHECK(FieldK::make(Int(-4))->class_number() == 1);
    CHECK(FieldK::make(Int(-23))->class_number() == 3);
    CHECK(FieldK::make(Int(-47))->class_number() == 5);
    CHECK(FieldK::make(Int(-31))->class_number() == 3);
    CHECK(FieldK::make(Int(5))->class_number() == 1);
    CHECK(FieldK::make(Int(12))->class_number() == 1);
    CHECK(FieldK::make(Int(40))->class_number() == 2);
    CHECK(FieldK::make(Int(-84))->class_number() == 4);
}

TEST_CASE("fundamental units") {
    auto K12 = FieldK::make(Int(12));
    REQUIRE(K12->fundamental_unit().has_value());
    QuadElem eps = *K12->fundamental_unit();
    CHECK(eps.w1 == 4);  // 2 + sqrt(3) = (4 + 1*sqrt(12))/2
    CHECK(eps.w2 == 1);

    auto K5 = FieldK::make(Int(5));
    QuadElem eps5 = *K5->fundamental_unit();
    CHECK(eps5.w1 == 1);
    CHECK(eps5.w2 == 1);
    CHECK(eps5.norm() == -1);

    auto K8 = FieldK::make(Int(8));
    QuadElem eps8 = *K8->fundamental_unit();
    CHECK(eps8.norm() == -1);  // 1 + sqrt(2)
    CHECK(eps8.w1 == 2);
    CHECK(eps8.w2 == 1);
}

TEST_CASE("factor_ideal norm product and conjugation equivariance") {
    std::mt19937_64 rng(21);
    for (long Dv : {-3L, -4L, 5L, -23L}) {
        auto K = FieldK::make(Int(Dv));
        for (int i = 0; i < 125; ++i) {
            QuadElem x = random_elem(rng, Int(Dv));
            auto f = K->factor_ideal(x);
            Int prod = 1;
            for (const auto& t : f) {
                Int nrm = (t.type == SplitType::Inert) ? t.p * t.p : t.p;
                for (long j = 0; j < t.exponent; ++j) prod *= nrm;
            }
            CHECK(prod == abs(x.norm()));
            // conjugation equivariance via multiset of (p, exponent) pairs
            auto g = K->factor_ideal(x.conj());
            REQUIRE(f.size() == g.size());
            Int tracked = 0;
            for (const auto& t : f) {
                bool found = false;
                for (const auto& s : g) {
                    if (s.p == t.p && s.exponent == t.exponent &&
                        s.prime == (t.type == SplitType::Split ? t.prime.conj() : t.prime)) {
                        found = true;
                        break;
                    }
                }
                CHECK(found);
                ++tracked;
            }
            CHECK(tracked == (Int)f.size());
        }
    }
}

TEST_CASE("selmer group S3(K)") {
    auto K3 = FieldK::make(Int(-3));
    CHECK(K3->selmer3_order() == 3);
    REQUIRE(K3->selmer3_basis().size() == 1);
    CHECK(K3->selmer3_basis()[0] == QuadElem(-1, 1, Int(-3)));

    auto K4 = FieldK::make(Int(-4));
    CHECK(K4->selmer3_order() == 1);

    auto K23 = FieldK::make(Int(-23));
    CHECK(K23->selmer3_order() == 3);
    REQUIRE(K23->selmer3_basis().size() == 1);
    // basis element generates the cube of a nonprincipal ideal
    const auto& gen = K23->cl3_generators();
    REQUIRE(gen.size() == 1);
    QuadElem gamma = gen[0].gamma;
    CHECK(K23->is_principal(gen[0].ideal.pow(3)));
    CHECK_FALSE(K23->is_principal(gen[0].ideal));
    CHECK(QuadIdeal::from_element(gamma) == gen[0].ideal.pow(3));

    auto K5 = FieldK::make(Int(5));
    CHECK(K5->selmer3_order() == 3);  // from the fundamental unit
}

TEST_CASE("is_cube_elem") {
    auto K3 = FieldK::make(Int(-3));
    QuadElem rho(-1, 1, Int(-3));
    CHECK_FALSE(K3->is_cube_elem(rho));
    CHECK(K3->is_cube_elem(rho.pow(3)));
    CHECK(K3->is_cube_elem(QuadElem::integer(-8, Int(-3))));
    CHECK_FALSE(K3->is_cube_elem(QuadElem::integer(2, Int(-3))));
    QuadElem x(4, 2, Int(-3));  // 2+sqrt(-3)
    CHECK(K3->is_cube_elem(x.pow(3)));
    CHECK_FALSE(K3->is_cube_elem(x.pow(3) * rho));

    auto K23 = FieldK::make(Int(-23));
    QuadElem gamma = K23->cl3_generators()[0].gamma;
    CHECK_FALSE(K23->is_cube_elem(gamma));  // virtual cube but not a cube

    auto K5 = FieldK::make(Int(5));
    QuadElem eps = *K5->fundamental_unit();
    CHECK_FALSE(K5->is_cube_elem(eps));
    CHECK(K5->is_cube_elem(eps.pow(3)));
    CHECK(K5->is_cube_elem(-QuadElem::one(Int(5))));
}

TEST_CASE("exact cube roots in K") {
    std::mt19937_64 rng(31);
    for (long Dv : {-3L, -4L, 5L, 12L, -23L}) {
        for (int i = 0; i < 100; ++i) {
            QuadElem x = random_elem(rng, Int(Dv), 25);
            auto r = exact_cbrt_in_K(x.pow(3));
            REQUIRE(r.has_value());
            CHECK(r->pow(3) == x.pow(3));
            if (!x.is_rational()) {
                QuadElem y = x.pow(3) * QuadElem::integer(2, Int(Dv));
                auto bad = exact_cbrt_in_K(y);
                if (bad) CHECK(bad->pow(3) == y);
            }
        }
    }
}

TEST_CASE("hilbert90 produces v with [u] = [v^2 tau(v)]") {
    std::mt19937_64 rng(41);
    for (long Dv : {-3L, -4L, 5L, -23L}) {
        auto K = FieldK::make(Int(Dv));
        CHECK(K->hilbert90_v(QuadElem::one(Int(Dv))).is_rational());
        int done = 0;
        while (done < 40) {
            QuadElem v0 = random_elem(rng, Int(Dv), 12);
            QuadElem u = v0 * v0 * v0.conj();
            if (u.is_zero()) continue;
            QuadElem v = K->hilbert90_v(u);
            // u / (v^2 tau v) must be a cube: test u * (v^2 tau v)^2 as integral element
            QuadElem w = v * v * v.conj();
            QuadElem q = u * w * w;
            // q should be cube * norm-ish rational^3 adjust: test class equality via is_cube of q * (N(w))^? ...
            // [u] = [w] iff u * w^2 is a cube in K* up to rational cubes; check ideal-exponent test:
            CHECK(K->is_cube_elem(q.div_int(q.content()) * QuadElem::integer(q.content(), Int(Dv))));
            ++done;
        }
    }
}

TEST_CASE("hilbert90 for rho in Q(sqrt(-3))") {
    auto K = FieldK::make(Int(-3));
    QuadElem rho(-1, 1, Int(-3));
    QuadElem v = K->hilbert90_v(rho);
    QuadElem w = v * v * v.conj();
    QuadElem q = rho * w * w;
    CHECK(K->is_cube_elem(q));
}

TEST_CASE("split representative finds small split primes in each class") {
    auto K23 = FieldK::make(Int(-23));
    for (unsigned id = 0; id < K23->class_number(); ++id) {
        QuadIdeal rep = K23->split_representative(id);
        CHECK(K23->class_id(rep) == id);
        if (id != K23->class_identity()) {
            CHECK(rep.norm() > 1);
            CHECK(K23->splitting_type(rep.norm()).type == SplitType::Split);
        }
    }
}
