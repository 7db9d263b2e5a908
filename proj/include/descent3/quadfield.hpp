#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "descent3/arith.hpp"

namespace descent3 {

struct QuadFieldError : ArithError {
    using ArithError::ArithError;
};

class FieldK;

// Element (w1 + w2*sqrt(D))/2 of K = Q(sqrt(D)).
// Algebraic-integer condition: w1 ≡ w2*D (mod 2).
struct QuadElem {
    Int w1, w2, D;

    QuadElem() : w1(0), w2(0), D(1) {}
    QuadElem(Int w1_, Int w2_, Int D_);

    static QuadElem integer(const Int& n, const Int& D) { return QuadElem(2 * n, 0, D); }
    static QuadElem sqrtD(const Int& D) { return QuadElem(0, 2, D); }
    static QuadElem one(const Int& D) { return integer(1, D); }

    bool is_zero() const { return w1 == 0 && w2 == 0; }
    bool is_rational() const { return w2 == 0; }
    Rat rational_value() const { return Rat(w1) / 2; }

    QuadElem conj() const { return QuadElem(w1, -w2, D); }
    Int norm() const { return (w1 * w1 - D * w2 * w2) / 4; }
    Int trace() const { return w1; }

    QuadElem operator+(const QuadElem& o) const;
    QuadElem operator-(const QuadElem& o) const;
    QuadElem operator*(const QuadElem& o) const;
    QuadElem operator-() const { return QuadElem(-w1, -w2, D); }
    bool operator==(const QuadElem& o) const { return w1 == o.w1 && w2 == o.w2 && D == o.D; }

    QuadElem mul_int(const Int& n) const { return QuadElem(w1 * n, w2 * n, D); }
    // Exact division by a rational integer; throws if not integral.
    QuadElem div_int(const Int& n) const;
    // Exact division x/y in K when the quotient is integral.
    std::optional<QuadElem> div_exact(const QuadElem& y) const;

    // Largest positive integer n with (*this)/n integral.
    Int content() const;
    bool is_primitive() const { return !is_zero() && content() == 1; }
    QuadElem primitive_part() const { return div_int(content()); }

    QuadElem pow(unsigned e) const;

    // Coordinates in the integral basis (1, w), w = (D + sqrt(D))/2.
    std::pair<Int, Int> omega_coords() const;
    static QuadElem from_omega(const Int& u, const Int& v, const Int& D);

    std::string str() const;
};

// Integral ideal in HNF against the basis (1, w):  a*Z + (b + c*w)*Z,
// with c | a, c | b, a,c > 0, 0 <= b < a. Norm = a*c.
struct QuadIdeal {
    Int a, b, c, D;

    static QuadIdeal whole_ring(const Int& D) { return QuadIdeal{1, 0, 1, D}; }
    static QuadIdeal from_element(const QuadElem& x);
    static QuadIdeal from_generators(const std::vector<QuadElem>& gens, const Int& D);

    bool operator==(const QuadIdeal& o) const {
        return a == o.a && b == o.b && c == o.c && D == o.D;
    }
    bool is_one() const { return a == 1 && b == 0 && c == 1; }
    Int norm() const { return a * c; }

    QuadIdeal operator*(const QuadIdeal& o) const;
    QuadIdeal conj() const;
    QuadIdeal pow(unsigned e) const;
    bool contains(const QuadElem& x) const;
    // Divide by rational integer content (exact).
    QuadIdeal div_int(const Int& n) const;
    bool divisible_by_int(const Int& n) const { return a % n == 0 && b % n == 0 && c % n == 0; }

    std::string str() const;
};

enum class SplitType { Split, Inert, Ramified };

struct PrimeSplitting {
    SplitType type;
    Int p;
    std::optional<QuadIdeal> prime;  // one prime above p (split/ramified); conj gives the other
};

struct IdealFactor {
    Int p;
    SplitType type;
    QuadIdeal prime;  // pZ_K itself in the inert case
    long exponent;
};

// K = Q(sqrt(D)) for fundamental discriminant D != 1.
class FieldK {
  public:
    static std::shared_ptr<const FieldK> make(const Int& D, const FactorBudget& budget = {});

    const Int& D() const { return D_; }
    bool is_imaginary() const { return D_ < 0; }
    unsigned class_number() const { return h_; }
    const std::vector<QuadElem>& torsion_units() const { return torsion_units_; }
    const std::optional<QuadElem>& fundamental_unit() const { return fundamental_unit_; }

    PrimeSplitting splitting_type(const Int& p) const;

    std::vector<IdealFactor> factor_ideal(const QuadElem& x, const FactorBudget& budget = {}) const;

    // Principality test; on success *gen (if nonnull) receives a generator.
    bool is_principal(const QuadIdeal& a, QuadElem* gen = nullptr) const;

    // Canonical key of the ideal class of a (class group element id).
    unsigned class_id(const QuadIdeal& a) const;
    unsigned class_mul(unsigned x, unsigned y) const;
    unsigned class_identity() const { return identity_class_; }
    bool class_is_cube(unsigned id) const;
    // Some class c with c^3 = id, if one exists.
    std::optional<unsigned> class_cuberoot(unsigned id) const;
    // An ideal representing class id whose support is a single split prime
    // (the whole ring for the identity). Deterministic ascending search.
    QuadIdeal split_representative(unsigned id, unsigned long prime_bound = 2000000) const;

    // Basis of S3(K) c K*/K*^3: unit contributions then Cl[3] contributions.
    const std::vector<QuadElem>& selmer3_basis() const { return selmer_basis_; }
    unsigned selmer3_order() const { return selmer_order_; }

    // Is the (nonzero, integral) element a cube in K*?
    bool is_cube_elem(const QuadElem& x, const FactorBudget& budget = {}) const;

    // Unit decomposition: x = torsion * eps^k (real) or x in the torsion list
    // (imaginary). Returns false if x is not a unit.
    bool unit_log(const QuadElem& x, unsigned* torsion_index, long* eps_exp) const;

    // v with [u] = [v^2 tau(v)] in K*/K*^3, for integral u with cube norm.
    QuadElem hilbert90_v(const QuadElem& u) const;

    // Class-group 3-rank data: for each F3-basis class of Cl[3], a generator
    // element of (representing ideal)^3.
    struct Cl3Gen {
        QuadIdeal ideal;  // split-prime representative of an order-3 class
        QuadElem gamma;   // generator of ideal^3
    };
    const std::vector<Cl3Gen>& cl3_generators() const { return cl3_gens_; }

  private:
    FieldK() = default;

    Int D_;
    unsigned h_ = 1;
    std::vector<QuadElem> torsion_units_;
    std::optional<QuadElem> fundamental_unit_;
    double eps_log_ = 0.0;  // log of the real embedding of the fundamental unit

    // Class group as a finite multiplication table over canonical ids.
    std::vector<QuadIdeal> class_reps_;
    std::vector<std::vector<unsigned>> mul_table_;
    unsigned identity_class_ = 0;
    std::vector<unsigned> cube_map_;  // id -> id of cube

    std::vector<Cl3Gen> cl3_gens_;
    std::vector<QuadElem> selmer_basis_;
    unsigned selmer_order_ = 1;

    void build_imaginary();
    void build_real();
    void build_class_table(const std::vector<QuadIdeal>& reps);
    void build_selmer();
    unsigned class_id_imaginary(const QuadIdeal& a) const;
    unsigned class_id_real(const QuadIdeal& a) const;
    bool is_principal_imaginary(const QuadIdeal& a, QuadElem* gen) const;
    bool is_principal_real(const QuadIdeal& a, QuadElem* gen) const;
};

// Exact cube root of x in K (if one exists); integral x, factorization-free.
std::optional<QuadElem> exact_cbrt_in_K(const QuadElem& x);

// Reduced binary quadratic form key for imaginary discriminants (internal but
// exposed for tests).
struct QForm {
    Int a, b, c;
};
QForm reduce_form(QForm f);
std::vector<QForm> reduced_forms(const Int& D);  // D < 0 fundamental

}  // namespace descent3
