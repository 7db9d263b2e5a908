#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace descent3 {

using Int = mpz_class;
using Rat = mpq_class;

struct ArithError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Factorization gave up within the configured budget. Never a wrong answer.
struct FactorError : ArithError {
    using ArithError::ArithError;
};

struct FactorBudget {
    unsigned long trial_limit = 1000000;  // trial division bound
    unsigned rho_iterations = 26;         // Pollard rho restarts before giving up
};

// value = sign * prod(p^e), primes strictly increasing, e >= 1.
struct PrimeFactorization {
    Int value;
    int sign = 1;
    std::vector<std::pair<Int, unsigned>> factors;

    Int recompose() const;
    unsigned exponent_of(const Int& p) const;
};

bool is_probable_prime(const Int& n);

PrimeFactorization factor(const Int& n, const FactorBudget& budget = {});

// v_p. Convention: valuation of 0 is kValInfinity.
inline constexpr long kValInfinity = 1L << 40;
long valuation(const Int& n, const Int& p);
long valuation(const Rat& x, const Int& p);

// Canonical positive cubefree representative u1^2*u2 of a class in Q*/Q*^3.
struct CubeClass {
    Int representative;  // u1^2 * u2, positive cubefree
    Int u1, u2;          // squarefree, coprime, positive

    bool is_trivial() const { return representative == 1; }
    bool operator==(const CubeClass& o) const { return representative == o.representative; }
};

CubeClass split_square_cube(const Rat& u, const FactorBudget& budget = {});

// Product of two classes in Q*/Q*^3, renormalized.
CubeClass cube_class_mul(const CubeClass& a, const CubeClass& b, const FactorBudget& budget = {});
CubeClass cube_class_inv(const CubeClass& a, const FactorBudget& budget = {});

// Exact cube tests; no factorization involved.
bool is_perfect_cube(const Int& n);
bool is_perfect_cube(const Rat& x);
std::optional<Int> exact_cbrt(const Int& n);

// x^((p-1)/3) test; every unit is a cube when p = 3 or p ≡ 2 (mod 3).
bool is_cube_mod_p(const Int& x, const Int& p);

Int mod_pow(const Int& base, const Int& exp, const Int& mod);
Int mod_inverse(const Int& x, const Int& mod);
// representative of a mod m in [0, m)
Int mod_positive(const Int& a, const Int& m);
Int int_pow(const Int& p, unsigned long e);

struct NotSplitError : ArithError {
    using ArithError::ArithError;
};

// Canonical d with d^2 ≡ D (mod p^k).
// p odd: the lift whose residue mod p lies in [1, (p-1)/2].
// p = 2 (needs D ≡ 1 mod 8, k >= 3): the root ≡ 1 (mod 4) lying in [1, 2^(k-1)).
Int padic_sqrt(const Int& D, const Int& p, unsigned k);

// Square root mod odd prime p (Tonelli-Shanks); nullopt if nonresidue.
std::optional<Int> sqrt_mod_p(const Int& a, const Int& p);

// Legendre/Kronecker symbol (a/n).
int kronecker(const Int& a, const Int& n);

// True iff D is 1 or a fundamental discriminant.
bool is_fundamental_discriminant(const Int& D);

// Squarefree kernel of n (product of primes with odd exponent, keeping sign).
Int squarefree_part(const Int& n, const FactorBudget& budget = {});

// Fundamental discriminant attached to the square class of nonzero rational x,
// together with f such that x = D * f^2.
std::pair<Int, Rat> fundamental_discriminant_of(const Rat& x, const FactorBudget& budget = {});

}  // namespace descent3
