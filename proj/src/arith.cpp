#include "descent3/arith.hpp"

#include <algorithm>
#include <map>

namespace descent3 {

Int PrimeFactorization::recompose() const {
    Int r = sign;
    for (const auto& [p, e] : factors) {
        Int pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
        r *= pe;
    }
    return r;
}

unsigned PrimeFactorization::exponent_of(const Int& p) const {
    for (const auto& [q, e] : factors)
        if (q == p) return e;
    return 0;
}

bool is_probable_prime(const Int& n) {
    // 30 Miller-Rabin rounds: deterministic below 3.3e24, else error probability < 4^-30.
    return mpz_probab_prime_p(n.get_mpz_t(), 30) != 0;
}

namespace {

Int pollard_rho(const Int& n, unsigned long c) {
    // Brent's cycle variant.
    Int x = 2, y = 2, d = 1, diff;
    Int saved_x;
    unsigned long power = 1, lam = 0;
    auto step = [&](Int& v) { v = (v * v + c) % n; };
    saved_x = x;
    while (d == 1) {
        if (lam == power) {
            saved_x = y;
            power *= 2;
            lam = 0;
        }
        step(y);
        ++lam;
        diff = y - saved_x;
        if (diff == 0) return 0;  // cycle without factor, caller retries with new c
        d = gcd(diff, n);
    }
    if (d == n) return 0;
    return d;
}

void factor_into(const Int& n, std::map<Int, unsigned>& out, const FactorBudget& budget) {
    Int m = n;
    if (m == 1) return;
    if (is_probable_prime(m)) {
        out[m] += 1;
        return;
    }
    for (unsigned c = 1; c <= budget.rho_iterations; ++c) {
        Int d = pollard_rho(m, c);
        if (d > 1 && d < m) {
            factor_into(d, out, budget);
            factor_into(m / d, out, budget);
            return;
        }
    }
    throw FactorError("factorization failed: budget exceeded on " + m.get_str());
}

}  // namespace

PrimeFactorization factor(const Int& n, const FactorBudget& budget) {
    if (n == 0) throw ArithError("factor: argument is zero");
    PrimeFactorization pf;
    pf.value = n;
    pf.sign = sgn(n) < 0 ? -1 : 1;
    Int m = abs(n);
    std::map<Int, unsigned> acc;
    for (unsigned long p : {2ul, 3ul, 5ul}) {
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
            acc[Int(p)] += 1;
        }
    }
    unsigned long d = 7;
    static const unsigned long wheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};
    unsigned wi = 0;
    while (d <= budget.trial_limit && Int(d) * d <= m) {
        while (mpz_divisible_ui_p(m.get_mpz_t(), d)) {
            mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), d);
            acc[Int(d)] += 1;
        }
        d += wheel[wi];
        wi = (wi + 1) & 7;
    }
    if (m > 1) {
        if (Int(budget.trial_limit) * budget.trial_limit >= m) {
            acc[m] += 1;  // below the square of the trial bound, so prime
        } else {
            factor_into(m, acc, budget);
        }
    }
    pf.factors.assign(acc.begin(), acc.end());
    return pf;
}

long valuation(const Int& n, const Int& p) {
    if (n == 0) return kValInfinity;
    Int r;
    return static_cast<long>(mpz_remove(r.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

long valuation(const Rat& x, const Int& p) {
    if (x == 0) return kValInfinity;
    return valuation(Int(x.get_num()), p) - valuation(Int(x.get_den()), p);
}

CubeClass split_square_cube(const Rat& u, const FactorBudget& budget) {
    if (u == 0) throw ArithError("split_square_cube: argument is zero");
    // [num/den] = [num * den^2] in Q*/Q*^3; sign drops since -1 is a cube.
    PrimeFactorization fn = factor(Int(u.get_num()), budget);
    PrimeFactorization fd = factor(Int(u.get_den()), budget);
    std::map<Int, unsigned> e;
    for (const auto& [p, k] : fn.factors) e[p] += k;
    for (const auto& [p, k] : fd.factors) e[p] += 2 * k;
    CubeClass c;
    c.u1 = 1;
    c.u2 = 1;
    for (const auto& [p, k] : e) {
        switch (k % 3) {
            case 1: c.u2 *= p; break;
            case 2: c.u1 *= p; break;
            default: break;
        }
    }
    c.representative = c.u1 * c.u1 * c.u2;
    return c;
}

CubeClass cube_class_mul(const CubeClass& a, const CubeClass& b, const FactorBudget& budget) {
    return split_square_cube(Rat(a.representative) * Rat(b.representative), budget);
}

CubeClass cube_class_inv(const CubeClass& a, const FactorBudget& budget) {
    return split_square_cube(Rat(1) / Rat(a.representative), budget);
}

bool is_perfect_cube(const Int& n) {
    if (n == 0) return true;
    Int root, rem;
    mpz_rootrem(root.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t(), 3);
    return rem == 0;
}

bool is_perfect_cube(const Rat& x) {
    return is_perfect_cube(Int(x.get_num())) && is_perfect_cube(Int(x.get_den()));
}

std::optional<Int> exact_cbrt(const Int& n) {
    Int root, rem;
    mpz_rootrem(root.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t(), 3);
    if (rem != 0) return std::nullopt;
    return root;
}

Int mod_pow(const Int& base, const Int& exp, const Int& mod) {
    Int r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
    return r;
}

Int mod_inverse(const Int& x, const Int& mod) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t()) == 0)
        throw ArithError("mod_inverse: not invertible");
    return r;
}

Int mod_positive(const Int& a, const Int& m) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

Int int_pow(const Int& p, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), p.get_mpz_t(), e);
    return r;
}

bool is_cube_mod_p(const Int& x, const Int& p) {
    if (x % p == 0) throw ArithError("is_cube_mod_p: unit required");
    if (p == 3 || p % 3 == 2) return true;  // cubing is a bijection
    return mod_pow(x, (p - 1) / 3, p) == 1;
}

int kronecker(const Int& a, const Int& n) {
    return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

std::optional<Int> sqrt_mod_p(const Int& a0, const Int& p) {
    Int a = ((a0 % p) + p) % p;
    if (a == 0) return Int(0);
    if (p == 2) return a;
    if (kronecker(a, p) != 1) return std::nullopt;
    if (p % 4 == 3) return mod_pow(a, (p + 1) / 4, p);
    // Tonelli-Shanks
    Int q = p - 1;
    unsigned s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    Int z = 2;
    while (kronecker(z, p) != -1) ++z;
    Int m = s, c = mod_pow(z, q, p), t = mod_pow(a, q, p), r = mod_pow(a, (q + 1) / 2, p);
    while (t != 1) {
        Int t2 = t;
        unsigned i = 0;
        while (t2 != 1) {
            t2 = t2 * t2 % p;
            ++i;
        }
        Int b = c;
        for (Int j = 0; j < m - i - 1; ++j) b = b * b % p;
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    return r;
}

Int padic_sqrt(const Int& D, const Int& p, unsigned k) {
    if (k < 1) throw ArithError("padic_sqrt: k >= 1 required");
    Int pk;
    mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), k);
    if (p == 2) {
        Int d8 = ((D % 8) + 8) % 8;
        if (d8 != 1) throw NotSplitError("padic_sqrt: not split (D != 1 mod 8)");
        if (k <= 2) return 1;
        // Lift from mod 8 upward: r and r + 2^(j-1) are the two extensions.
        Int r = 1, pj = 8;
        for (unsigned j = 3; j < k; ++j) {
            Int next_mod = pj * 2;
            if ((r * r - D) % next_mod != 0) r += pj / 2;
            pj = next_mod;
        }
        // canonical: the root ≡ 1 (mod 4) in [1, 2^(k-1))
        Int half = pk / 2;
        Int candidates[4] = {r % pk, (pk - r) % pk, (r + half) % pk, (pk - r + half) % pk};
        Int best = -1;
        for (const Int& c : candidates) {
            if (c % 4 == 1 && c < half && (c * c - D) % pk == 0)
                if (best < 0 || c < best) best = c;
        }
        if (best < 0) throw ArithError("padic_sqrt: internal canonicalization failure");
        return best;
    }
    if (D % p == 0) throw NotSplitError("padic_sqrt: p divides D");
    auto r0 = sqrt_mod_p(D, p);
    if (!r0) throw NotSplitError("padic_sqrt: nonresidue");
    Int r = *r0;
    if (r > (p - 1) / 2) r = p - r;  // canonical mod-p residue in [1,(p-1)/2]
    // Hensel: r <- r - (r^2-D)/(2r) with increasing precision.
    Int pj = p;
    unsigned j = 1;
    while (j < k) {
        unsigned j2 = std::min(2 * j, k);
        Int pj2;
        mpz_pow_ui(pj2.get_mpz_t(), p.get_mpz_t(), j2);
        Int inv = mod_inverse(2 * r % pj2, pj2);
        r = (r - (r * r - D) % pj2 * inv) % pj2;
        r = ((r % pj2) + pj2) % pj2;
        j = j2;
        pj = pj2;
    }
    return r % pk;
}

bool is_fundamental_discriminant(const Int& D) {
    if (D == 1) return true;
    if (D == 0) return false;
    Int m = ((D % 4) + 4) % 4;
    auto squarefree = [](const Int& n) {
        if (n == 0) return false;
        PrimeFactorization pf = factor(n);
        for (const auto& [p, e] : pf.factors)
            if (e > 1) return false;
        return true;
    };
    if (m == 1) return squarefree(D);
    if (m == 0) {
        Int q = D / 4;
        Int qm = ((q % 4) + 4) % 4;
        return (qm == 2 || qm == 3) && squarefree(q);
    }
    return false;
}

Int squarefree_part(const Int& n, const FactorBudget& budget) {
    if (n == 0) throw ArithError("squarefree_part: argument is zero");
    PrimeFactorization pf = factor(n, budget);
    Int r = pf.sign;
    for (const auto& [p, e] : pf.factors)
        if (e % 2) r *= p;
    return r;
}

std::pair<Int, Rat> fundamental_discriminant_of(const Rat& x, const FactorBudget& budget) {
    if (x == 0) throw ArithError("fundamental_discriminant_of: argument is zero");
    // x and num*den share a square class.
    Int s = squarefree_part(Int(x.get_num()) * Int(x.get_den()), budget);
    Int D;
    Int sm = ((s % 4) + 4) % 4;
    D = (sm == 1) ? s : 4 * s;
    Rat f2 = x / Rat(D);
    // f2 is a square of a rational; extract the square root exactly.
    Int fn, fd;
    Rat f2c = f2;
    f2c.canonicalize();
    if (mpz_root(fn.get_mpz_t(), Int(f2c.get_num()).get_mpz_t(), 2) == 0 ||
        mpz_root(fd.get_mpz_t(), Int(f2c.get_den()).get_mpz_t(), 2) == 0)
        throw ArithError("fundamental_discriminant_of: internal square extraction failure");
    return {D, Rat(fn) / Rat(fd)};
}

}  // namespace descent3
