#include "descent3/search.hpp"

#include <algorithm>
#include <functional>

namespace descent3 {

namespace {

Int isqrt(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

void bisect_roots(const std::function<Int(const Int&)>& f, Int lo, Int hi, bool increasing,
                  std::vector<Int>& roots) {
    if (lo > hi) return;
    Int flo = f(lo), fhi = f(hi);
    if (flo == 0) roots.push_back(lo);
    if (fhi == 0) roots.push_back(hi);
    if (!increasing) {
        std::swap(lo, hi);
        std::swap(flo, fhi);
    }
    if (flo > 0 || fhi < 0) return;
    while (abs(hi - lo) > 1) {
        Int mid = (lo + hi) / 2;
        Int fm = f(mid);
        if (fm == 0) {
            roots.push_back(mid);
            return;
        }
        if (fm < 0)
            lo = mid;
        else
            hi = mid;
    }
}

}  // namespace

std::vector<Int> cubic_integer_roots(const Int& A0, const Int& B0, const Int& C0, const Int& E0,
                                     const Int& lo, const Int& hi) {
    std::vector<Int> roots;
    if (lo > hi) return roots;
    Int A = A0, B = B0, C = C0, E = E0;
    if (A == 0) {
        if (B == 0) {
            if (C == 0) {
                if (E == 0) {
                    for (Int z = lo; z <= hi; ++z) roots.push_back(z);  // degenerate: callers avoid
                }
                return roots;
            }
            // C z + E = 0
            if (E % C == 0) {
                Int z = -E / C;
                if (z >= lo && z <= hi) roots.push_back(z);
            }
            return roots;
        }
        // quadratic B z^2 + C z + E
        Int disc = C * C - 4 * B * E;
        if (disc < 0) return roots;
        Int s, rem;
        mpz_sqrtrem(s.get_mpz_t(), rem.get_mpz_t(), disc.get_mpz_t());
        if (rem != 0) return roots;
        for (int sign = 0; sign < (s == 0 ? 1 : 2); ++sign) {
            Int num = -C + (sign ? -s : s);
            if (num % (2 * B) == 0) {
                Int z = num / (2 * B);
                if (z >= lo && z <= hi) roots.push_back(z);
            }
        }
        std::sort(roots.begin(), roots.end());
        roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
        return roots;
    }
    if (A < 0) {
        A = -A;
        B = -B;
        C = -C;
        E = -E;
    }
    auto f = [&](const Int& z) -> Int { return ((A * z + B) * z + C) * z + E; };
    Int disc = B * B - 3 * A * C;  // critical points of f' up to the factor
    if (disc <= 0) {
        bisect_roots(f, lo, hi, true, roots);
    } else {
        Int s0 = isqrt(disc);
        // crit points (-B +- sqrt(disc))/(3A); conservative integer windows
        auto fdiv = [](const Int& a, const Int& b) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
            return q;
        };
        Int t1lo = fdiv(-B - s0 - 1, 3 * A), t1hi = fdiv(-B - s0, 3 * A) + 1;
        Int t2lo = fdiv(-B + s0, 3 * A), t2hi = fdiv(-B + s0 + 1, 3 * A) + 1;
        auto clamp = [&](const Int& v) { return std::max(lo, std::min(hi, v)); };
        // monotone pieces with a direct scan over the fuzzy windows
        bisect_roots(f, lo, clamp(t1lo - 1), true, roots);
        for (Int z = clamp(t1lo - 1); z <= clamp(t1hi + 1); ++z)
            if (f(z) == 0) roots.push_back(z);
        bisect_roots(f, clamp(t1hi + 1), clamp(t2lo - 1), false, roots);
        for (Int z = clamp(t2lo - 1); z <= clamp(t2hi + 1); ++z)
            if (f(z) == 0) roots.push_back(z);
        bisect_roots(f, clamp(t2hi + 1), hi, true, roots);
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

SearchOutcome search_cubic(const Form10i& F, long bound) {
    SearchOutcome out;
    out.bound_used = bound;
    std::optional<std::array<Int, 3>> best;
    Int best_h = 0;
    auto consider = [&](Int X, Int Y, Int Z) {
        if (X == 0 && Y == 0 && Z == 0) return;
        Int g = gcd(gcd(X, Y), Z);
        if (g > 1) {
            X /= g;
            Y /= g;
            Z /= g;
        }
        Int lead = X != 0 ? X : (Y != 0 ? Y : Z);
        if (lead < 0) {
            X = -X;
            Y = -Y;
            Z = -Z;
        }
        Int h = std::max(std::max(abs(X), abs(Y)), abs(Z));
        if (!best || h < best_h) {
            best = std::array<Int, 3>{X, Y, Z};
            best_h = h;
        }
    };
    for (long m = 0; m <= bound; ++m) {
        if (best && best_h <= m) break;  // nothing smaller can appear later
        // shell max(|X|, |Y|) == m, X >= 0 by the (X,Y,Z) -> (-X,-Y,-Z) symmetry
        for (long X = 0; X <= m; ++X) {
            std::vector<long> ys;
            if (X == m) {
                for (long Y = -m; Y <= m; ++Y) ys.push_back(Y);
            } else {
                ys = {-m, m};
            }
            for (long Y : ys) {
                if (X == 0 && Y < 0) continue;  // sign symmetry within the X=0 plane
                Int Xi(X), Yi(Y);
                Int A = F[2];
                Int B = F[7] * Xi + F[8] * Yi;
                Int C = F[4] * Xi * Xi + F[6] * Yi * Yi + F[9] * Xi * Yi;
                Int E = F[0] * Xi * Xi * Xi + F[1] * Yi * Yi * Yi + F[3] * Xi * Xi * Yi +
                        F[5] * Xi * Yi * Yi;
                for (const Int& Z : cubic_integer_roots(A, B, C, E, Int(-bound), Int(bound)))
                    consider(Xi, Yi, Z);
            }
        }
    }
    out.found = best;
    out.exhausted = !best;
    return out;
}

std::vector<RationalPoint> search_curve_points(const CurveModel& E, long bound) {
    std::vector<RationalPoint> pts;
    Int H(bound);
    for (Int d = 1; d * d <= H; ++d) {
        for (Int m = -H; m <= H; ++m) {
            if (gcd(m, d) != 1) continue;
            Int t = E.a * m + E.b * d * d;
            Int n2 = m * m * m + E.D * d * d * t * t;
            if (n2 < 0) continue;
            Int n, rem;
            mpz_sqrtrem(n.get_mpz_t(), rem.get_mpz_t(), n2.get_mpz_t());
            if (rem != 0) continue;
            if (gcd(n, d) != 1) continue;
            Rat x = Rat(m) / Rat(d * d);
            Rat y = Rat(n) / Rat(d * d * d);
            RationalPoint P = RationalPoint::affine(x, y);
            if (!on_curve(E, P)) continue;
            pts.push_back(P);
            if (n != 0) pts.push_back(neg(P));
        }
    }
    return pts;
}

}  // namespace descent3
