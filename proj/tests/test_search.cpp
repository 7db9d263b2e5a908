#include "doctest.h"

#include "descent3/localsolve.hpp"
#include "descent3/search.hpp"

using namespace descent3;

static CurveModel curve(long D, long a, long b) {
    return normalize_model(Rat(D), Rat(a), Rat(b)).curve;
}

TEST_CASE("cubic integer roots") {
    // (z-3)(z+5)(z-11) = z^3 - 9z^2 - 53z + 165... expand: check via evaluation
    auto roots = cubic_integer_roots(1, -9, -37, 165, -100, 100);
    CHECK(roots == std::vector<Int>{-5, 3, 11});
    auto none = cubic_integer_roots(1, 0, 0, 5, -100, 100);
    CHECK(none.empty());
    auto quad = cubic_integer_roots(0, 1, -1, -6, -10, 10);  // z^2 - z - 6 = (z-3)(z+2)
    CHECK(quad == std::vector<Int>{-2, 3});
    auto lin = cubic_integer_roots(0, 0, 7, -21, -10, 10);
    CHECK(lin == std::vector<Int>{3});
}

TEST_CASE("search_cubic finds the expected minimal witnesses") {
    // u=1 cubic of y^2 = x^3 + (ax+b)^2: (1,-1,0) at height 1
    CurveModel E = curve(1, 2, 3);
    auto T = build_cubic_d1(E, split_square_cube(Rat(1)));
    auto out = search_cubic(integer_form(T.cubic.coefficients()), 10);
    REQUIRE(out.found.has_value());
    CHECK(*out.found == std::array<Int, 3>{1, -1, 0});

    // X^3 + 2Y^3 + Z^3: (1,-1,1) -> canonical (1,-1,1)
    auto out2 = search_cubic(Form10i{1, 2, 1, 0, 0, 0, 0, 0, 0, 0}, 10);
    REQUIRE(out2.found.has_value());
    CHECK(*out2.found == std::array<Int, 3>{1, -1, 1});

    // X^3+2Y^3+11Z^3: minimal solution (3,-2,-1) up to sign convention
    auto out3 = search_cubic(Form10i{1, 2, 11, 0, 0, 0, 0, 0, 0, 0}, 10);
    REQUIRE(out3.found.has_value());
    CHECK(eval_form(Form10i{1, 2, 11, 0, 0, 0, 0, 0, 0, 0}, (*out3.found)[0], (*out3.found)[1],
                    (*out3.found)[2]) == 0);
    Int h = std::max(std::max(abs((*out3.found)[0]), abs((*out3.found)[1])),
                     abs((*out3.found)[2]));
    CHECK(h == 3);

    // insoluble cubic: exhausted
    auto out4 = search_cubic(Form10i{1, 2, 7, 0, 0, 0, 0, 0, 0, 0}, 6);
    CHECK_FALSE(out4.found.has_value());
    CHECK(out4.exhausted);
}

TEST_CASE("search determinism") {
    Form10i F{1, 2, 11, 0, 0, 0, 0, 0, 0, 0};
    auto a = search_cubic(F, 25);
    auto b = search_cubic(F, 25);
    REQUIRE(a.found.has_value());
    CHECK(*a.found == *b.found);
}

TEST_CASE("search_curve_points") {
    CurveModel E = curve(1, 0, 1);
    auto pts = search_curve_points(E, 30);
    auto has = [&](long x, long y) {
        return std::find(pts.begin(), pts.end(),
                         RationalPoint::affine(Rat(x), Rat(y))) != pts.end();
    };
    CHECK(has(2, 3));
    CHECK(has(2, -3));
    CHECK(has(0, 1));
    CHECK(has(0, -1));
    CHECK(has(-1, 0));
    for (const auto& P : pts) CHECK(on_curve(E, P));

    // y^2 = x^3 + 61^2 has no nontorsion point below the bound (rank 0)
    CurveModel E61 = curve(1, 0, 61);
    auto pts61 = search_curve_points(E61, 400);
    for (const auto& P : pts61) CHECK(P.x == 0);

    // y^2 = x^3 - 432 contains (12, +-36)
    CurveModel Ed = curve(-3, 0, 12);
    auto ptsd = search_curve_points(Ed, 50);
    CHECK(std::find(ptsd.begin(), ptsd.end(),
                    RationalPoint::affine(Rat(12), Rat(36))) != ptsd.end());
}

TEST_CASE("found solutions map to points with the right class") {
    CurveModel E = curve(1, 0, 11);
    auto T = build_cubic_d1(E, split_square_cube(Rat(2)));
    auto out = search_cubic(integer_form(T.cubic.coefficients()), 30);
    REQUIRE(out.found.has_value());
    auto [X, Y, Z] = *out.found;
    if (Z != 0) {
        RationalPoint P = point_from_solution_d1(T, Rat(X), Rat(Y), Rat(Z));
        CHECK(on_curve(E, P));
        CHECK(alpha_d1(E, P) == T.u);
    }
}
