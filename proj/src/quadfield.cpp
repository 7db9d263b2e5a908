#include "descent3/quadfield.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace descent3 {

namespace {

// N0 = (D^2 - D)/4; omega = (D + sqrt(D))/2 satisfies x^2 - D x + N0 = 0.
Int omega_norm_const(const Int& D) { return (D * D - D) / 4; }

bool parity_ok(const Int& w1, const Int& w2, const Int& D) {
    return ((w1 - w2 * D) % 2) == 0;
}

Int isqrt(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool perfect_square(const Int& n, Int* root = nullptr) {
    if (n < 0) return false;
    Int r, rem;
    mpz_sqrtrem(r.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t());
    if (rem != 0) return false;
    if (root) *root = r;
    return true;
}

Int floordiv(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

}  // namespace

QuadElem::QuadElem(Int w1_, Int w2_, Int D_) : w1(std::move(w1_)), w2(std::move(w2_)), D(std::move(D_)) {
    if (!parity_ok(w1, w2, D))
        throw QuadFieldError("QuadElem: parity condition w1 = w2*D (mod 2) violated");
}

QuadElem QuadElem::operator+(const QuadElem& o) const { return QuadElem(w1 + o.w1, w2 + o.w2, D); }
QuadElem QuadElem::operator-(const QuadElem& o) const { return QuadElem(w1 - o.w1, w2 - o.w2, D); }

QuadElem QuadElem::operator*(const QuadElem& o) const {
    Int n1 = w1 * o.w1 + w2 * o.w2 * D;
    Int n2 = w1 * o.w2 + w2 * o.w1;
    return QuadElem(n1 / 2, n2 / 2, D);
}

QuadElem QuadElem::div_int(const Int& n) const {
    if (n == 0) throw QuadFieldError("QuadElem::div_int by zero");
    if (w1 % n != 0 || w2 % n != 0) throw QuadFieldError("QuadElem::div_int not exact");
    return QuadElem(w1 / n, w2 / n, D);
}

std::optional<QuadElem> QuadElem::div_exact(const QuadElem& y) const {
    if (y.is_zero()) throw QuadFieldError("QuadElem::div_exact by zero");
    Int n = y.norm();
    QuadElem num = *this * y.conj();
    if (num.w1 % n != 0 || num.w2 % n != 0) return std::nullopt;
    QuadElem q(num.w1 / n, num.w2 / n, D);
    if (!parity_ok(q.w1, q.w2, D)) return std::nullopt;
    return q;
}

Int QuadElem::content() const {
    if (is_zero()) throw QuadFieldError("QuadElem::content of zero");
    Int g = gcd(w1, w2);
    while (g > 1 && !parity_ok(w1 / g, w2 / g, D)) g /= 2;
    return g;
}

QuadElem QuadElem::pow(unsigned e) const {
    QuadElem r = QuadElem::one(D);
    QuadElem base = *this;
    while (e) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

std::pair<Int, Int> QuadElem::omega_coords() const {
    // (w1 + w2 sqrt(D))/2 = u + v*omega with u = (w1 - D w2)/2, v = w2.
    return {(w1 - D * w2) / 2, w2};
}

QuadElem QuadElem::from_omega(const Int& u, const Int& v, const Int& D) {
    return QuadElem(2 * u + D * v, v, D);
}

std::string QuadElem::str() const {
    std::ostringstream os;
    os << "(" << w1.get_str() << (w2 >= 0 ? "+" : "") << w2.get_str() << "*sqrt(" << D.get_str()
       << "))/2";
    return os.str();
}

QuadIdeal QuadIdeal::from_generators(const std::vector<QuadElem>& gens, const Int& D) {
    // HNF of the Z-module spanned by the omega-coordinate columns.
    std::vector<std::pair<Int, Int>> cols;
    for (const auto& g : gens) {
        if (!g.is_zero()) cols.push_back(g.omega_coords());
    }
    if (cols.empty()) throw QuadFieldError("QuadIdeal: zero module");
    // c = gcd of v-parts, with a combination realizing it.
    Int c = 0, b0 = 0;
    for (const auto& [u, v] : cols) {
        if (v == 0) continue;
        if (c == 0) {
            c = abs(v);
            b0 = (v > 0) ? u : -u;
        } else {
            Int g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), c.get_mpz_t(), v.get_mpz_t());
            b0 = s * b0 + t * u;
            c = g;
        }
    }
    if (c == 0) throw QuadFieldError("QuadIdeal: module of rank < 2");
    Int a = 0;
    for (const auto& [u, v] : cols) {
        Int residue = u - (v / c) * b0;
        a = gcd(a, residue);
    }
    a = abs(a);
    if (a == 0) throw QuadFieldError("QuadIdeal: module of rank < 2");
    Int b = mod_positive(b0, a);
    QuadIdeal id{a, b, c, D};
    return id;
}

QuadIdeal QuadIdeal::from_element(const QuadElem& x) {
    if (x.is_zero()) throw QuadFieldError("QuadIdeal: zero element");
    const Int& D = x.D;
    auto [u, v] = x.omega_coords();
    Int N0 = omega_norm_const(D);
    // x * omega = -v*N0 + (u + vD) omega
    QuadElem xo = QuadElem::from_omega(-v * N0, u + v * D, D);
    return from_generators({x, xo}, D);
}

QuadIdeal QuadIdeal::operator*(const QuadIdeal& o) const {
    Int N0 = omega_norm_const(D);
    std::vector<QuadElem> gens;
    gens.push_back(QuadElem::from_omega(a * o.a, 0, D));
    gens.push_back(QuadElem::from_omega(a * o.b, a * o.c, D));
    gens.push_back(QuadElem::from_omega(o.a * b, o.a * c, D));
    gens.push_back(
        QuadElem::from_omega(b * o.b - c * o.c * N0, b * o.c + o.b * c + c * o.c * D, D));
    return from_generators(gens, D);
}

QuadIdeal QuadIdeal::conj() const {
    // tau(omega) = D - omega.
    std::vector<QuadElem> gens;
    gens.push_back(QuadElem::from_omega(a, 0, D));
    gens.push_back(QuadElem::from_omega(b + c * D, -c, D));
    return from_generators(gens, D);
}

QuadIdeal QuadIdeal::pow(unsigned e) const {
    QuadIdeal r = whole_ring(D);
    QuadIdeal base = *this;
    while (e) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

bool QuadIdeal::contains(const QuadElem& x) const {
    if (x.is_zero()) return true;
    auto [u, v] = x.omega_coords();
    if (v % c != 0) return false;
    return (u - (v / c) * b) % a == 0;
}

QuadIdeal QuadIdeal::div_int(const Int& n) const {
    if (!divisible_by_int(n)) throw QuadFieldError("QuadIdeal::div_int not exact");
    return QuadIdeal{a / n, b / n, c / n, D};
}

std::string QuadIdeal::str() const {
    std::ostringstream os;
    os << "[" << a.get_str() << ", " << b.get_str() << "+" << c.get_str() << "w]";
    return os.str();
}

// ---------------------------------------------------------------------------
// Reduced binary quadratic forms, D < 0.

QForm reduce_form(QForm f) {
    const Int D = f.b * f.b - 4 * f.a * f.c;
    for (;;) {
        // normalize: -a < b <= a
        if (f.b > f.a || f.b <= -f.a) {
            Int r = mod_positive(f.b + f.a - 1, 2 * f.a);
            Int bn = r - f.a + 1;  // in (-a, a]
            f.c = (bn * bn - D) / (4 * f.a);
            f.b = bn;
        }
        if (f.a > f.c) {
            f = QForm{f.c, -f.b, f.a};
            continue;
        }
        if (f.a == f.c && f.b < 0) f.b = -f.b;
        break;
    }
    return f;
}

std::vector<QForm> reduced_forms(const Int& D) {
    if (D >= 0) throw QuadFieldError("reduced_forms: D must be negative");
    std::vector<QForm> out;
    Int bmax = isqrt(-D / 3);
    for (Int b = mod_positive(D, 2); b <= bmax; b += 2) {
        Int m = (b * b - D) / 4;  // = a*c
        for (Int a = std::max(Int(1), b); a * a <= m; ++a) {
            if (m % a != 0) continue;
            Int c = m / a;
            if (gcd(gcd(a, b), c) != 1) continue;
            out.push_back(QForm{a, b, c});
            if (b > 0 && b < a && a < c) out.push_back(QForm{a, -b, c});
        }
    }
    std::sort(out.begin(), out.end(), [](const QForm& x, const QForm& y) {
        if (x.a != y.a) return x.a < y.a;
        if (x.b != y.b) return x.b < y.b;
        return x.c < y.c;
    });
    return out;
}

// ---------------------------------------------------------------------------
// FieldK

std::shared_ptr<const FieldK> FieldK::make(const Int& D, const FactorBudget& budget) {
    (void)budget;
    if (D == 1)
        throw QuadFieldError("make_field: D = 1 is the degenerate rational case; use the D=1 code paths");
    if (!is_fundamental_discriminant(D))
        throw QuadFieldError("make_field: D is not a fundamental discriminant; normalize the curve first");

    static std::mutex cache_mutex;
    static std::map<Int, std::shared_ptr<const FieldK>> cache;
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(D);
        if (it != cache.end()) return it->second;
    }

    auto K = std::shared_ptr<FieldK>(new FieldK());
    K->D_ = D;
    if (D == -3) {
        QuadElem rho(-1, 1, D);
        for (int j = 0; j < 3; ++j) {
            QuadElem r = rho.pow(j);
            K->torsion_units_.push_back(r);
            K->torsion_units_.push_back(-r);
        }
    } else if (D == -4) {
        QuadElem i(0, 1, D);
        K->torsion_units_ = {QuadElem::one(D), -QuadElem::one(D), i, -i};
    } else {
        K->torsion_units_ = {QuadElem::one(D), -QuadElem::one(D)};
    }
    if (D < 0)
        K->build_imaginary();
    else
        K->build_real();
    K->build_selmer();

    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.emplace(D, K);
    return K;
}

namespace {

// Ideal attached to the form (a,b,c): aZ + ((b+sqrt D)/2)Z. Chosen as the
// exact inverse of the ideal -> form map in class_id_imaginary.
QuadIdeal ideal_of_form(const QForm& f, const Int& D) {
    Int u = (f.b - D) / 2;
    return QuadIdeal::from_generators(
        {QuadElem::integer(f.a, D), QuadElem::from_omega(u, 1, D)}, D);
}

}  // namespace

void FieldK::build_imaginary() {
    auto forms = reduced_forms(D_);
    h_ = static_cast<unsigned>(forms.size());
    std::vector<QuadIdeal> reps;
    reps.reserve(forms.size());
    for (const auto& f : forms) reps.push_back(ideal_of_form(f, D_));
    build_class_table(reps);
}

unsigned FieldK::class_id_imaginary(const QuadIdeal& a0) const {
    QuadIdeal a = a0.div_int(a0.c);  // primitive part
    QForm f{a.a, 2 * a.b + D_, (a.b * a.b + a.b * D_ + omega_norm_const(D_)) / a.a};
    f = reduce_form(f);
    auto forms = reduced_forms(D_);
    for (unsigned i = 0; i < forms.size(); ++i)
        if (forms[i].a == f.a && forms[i].b == f.b && forms[i].c == f.c) return i;
    throw QuadFieldError("class_id: reduced form not found (internal)");
}

void FieldK::build_real() {
    // Fundamental unit from the continued fraction of (D + sqrt(D))/2.
    Int P = D_, Q = 2;
    Int s = isqrt(D_);
    std::map<std::pair<Int, Int>, unsigned> seen;
    std::vector<Int> partials;
    std::vector<std::pair<Int, Int>> states;
    unsigned start = 0;
    for (unsigned i = 0;; ++i) {
        auto key = std::make_pair(P, Q);
        auto it = seen.find(key);
        if (it != seen.end()) {
            start = it->second;
            break;
        }
        seen.emplace(key, i);
        states.push_back(key);
        Int ai = floordiv(P + s, Q);
        partials.push_back(ai);
        Int Pn = ai * Q - P;
        Int Qn = (D_ - Pn * Pn) / Q;
        if (Qn == 0) throw QuadFieldError("fundamental unit: discriminant is a square");
        P = Pn;
        Q = Qn;
        if (i > 2000000) throw QuadFieldError("fundamental unit: period exceeds budget");
    }
    // Cycle matrix over one period starting at `start`.
    Int A = 1, B = 0, C = 0, E = 1;
    for (unsigned i = start; i < partials.size(); ++i) {
        // M <- M * [[a_i, 1], [1, 0]]
        Int A2 = A * partials[i] + B, C2 = C * partials[i] + E;
        B = A;
        E = C;
        A = A2;
        C = C2;
    }
    Int Ps = states[start].first, Qs = states[start].second;
    // eps = C*(Ps + sqrt(D))/Qs + E
    Int w1 = 2 * (C * Ps + E * Qs), w2 = 2 * C;
    if (w1 % Qs != 0 || w2 % Qs != 0)
        throw QuadFieldError("fundamental unit: non-integral result (internal)");
    QuadElem eps(w1 / Qs, w2 / Qs, D_);
    Int n = eps.norm();
    if (n != 1 && n != -1) throw QuadFieldError("fundamental unit: candidate is not a unit (internal)");
    if (eps.w1 < 0) eps = -eps;
    fundamental_unit_ = eps;
    eps_log_ = std::log((eps.w1.get_d() + eps.w2.get_d() * std::sqrt(D_.get_d())) / 2.0);

    // Class representatives: primitive ideals of norm up to the Minkowski bound.
    Int mb = isqrt(D_) / 2;
    if (mb < 1) mb = 1;
    std::vector<QuadIdeal> reps{QuadIdeal::whole_ring(D_)};
    Int N0 = omega_norm_const(D_);
    for (Int n1 = 2; n1 <= mb; ++n1) {
        for (Int b = 0; b < n1; ++b) {
            if ((b * b + b * D_ + N0) % n1 != 0) continue;
            QuadIdeal cand{n1, b, 1, D_};
            bool known = false;
            for (const auto& r : reps) {
                if (is_principal_real(cand * r.conj(), nullptr)) {
                    known = true;
                    break;
                }
            }
            if (!known) reps.push_back(cand);
        }
    }
    h_ = static_cast<unsigned>(reps.size());
    build_class_table(reps);
}

void FieldK::build_class_table(const std::vector<QuadIdeal>& reps) {
    class_reps_ = reps;
    unsigned n = static_cast<unsigned>(reps.size());
    for (unsigned i = 0; i < n; ++i)
        if (class_id(reps[i]) != i)
            throw QuadFieldError("class table: representative/key mismatch (internal)");
    mul_table_.assign(n, std::vector<unsigned>(n));
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = i; j < n; ++j)
            mul_table_[i][j] = mul_table_[j][i] = class_id(reps[i] * reps[j]);
    identity_class_ = class_id(QuadIdeal::whole_ring(D_));
    cube_map_.resize(n);
    for (unsigned i = 0; i < n; ++i)
        cube_map_[i] = mul_table_[mul_table_[i][i]][i];
}

unsigned FieldK::class_id(const QuadIdeal& a) const {
    return D_ < 0 ? class_id_imaginary(a) : class_id_real(a);
}

unsigned FieldK::class_id_real(const QuadIdeal& a) const {
    for (unsigned i = 0; i < class_reps_.size(); ++i)
        if (is_principal_real(a * class_reps_[i].conj(), nullptr)) return i;
    throw QuadFieldError("class_id: no representative matched (internal)");
}

unsigned FieldK::class_mul(unsigned x, unsigned y) const { return mul_table_[x][y]; }

bool FieldK::class_is_cube(unsigned id) const {
    return std::find(cube_map_.begin(), cube_map_.end(), id) != cube_map_.end();
}

std::optional<unsigned> FieldK::class_cuberoot(unsigned id) const {
    for (unsigned i = 0; i < cube_map_.size(); ++i)
        if (cube_map_[i] == id) return i;
    return std::nullopt;
}

QuadIdeal FieldK::split_representative(unsigned id, unsigned long prime_bound) const {
    if (id == identity_class_) return QuadIdeal::whole_ring(D_);
    Int p = 2;
    while (p <= prime_bound) {
        PrimeSplitting ps = splitting_type(p);
        if (ps.type == SplitType::Split) {
            if (class_id(*ps.prime) == id) return *ps.prime;
            QuadIdeal t = ps.prime->conj();
            if (class_id(t) == id) return t;
        }
        mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    }
    throw QuadFieldError("split_representative: no split prime found in class within bound");
}

PrimeSplitting FieldK::splitting_type(const Int& p) const {
    PrimeSplitting out;
    out.p = p;
    Int N0 = omega_norm_const(D_);
    auto make_prime = [&](const Int& r) {
        return QuadIdeal{p, mod_positive(r, p), 1, D_};
    };
    if (p == 2) {
        Int d8 = mod_positive(D_, 8);
        if (d8 == 1) {
            out.type = SplitType::Split;
            // root of x^2 - Dx + N0 mod 2; N0 even here, so r = 0 works.
            out.prime = make_prime((N0 % 2 == 0) ? Int(0) : Int(1));
        } else if (d8 == 5) {
            out.type = SplitType::Inert;
        } else {
            out.type = SplitType::Ramified;
            Int m = D_ / 4;
            out.prime = make_prime(mod_positive(m, 2));
        }
        return out;
    }
    int k = kronecker(D_, p);
    if (k == 1) {
        out.type = SplitType::Split;
        Int sq = *sqrt_mod_p(D_, p);
        // omega = (D+sqrt(D))/2 = r (mod the prime), ideal generator is omega - r
        Int r = (D_ + sq) % p * mod_inverse(2, p) % p;
        out.prime = make_prime(-r);
    } else if (k == -1) {
        out.type = SplitType::Inert;
    } else {
        out.type = SplitType::Ramified;
        Int r = mod_positive(D_ * mod_inverse(2, p), p);
        out.prime = make_prime(r);
    }
    if (out.prime) {
        // sanity: p | N(b + omega)
        const auto& pr = *out.prime;
        if ((pr.b * pr.b + pr.b * D_ + N0) % p != 0)
            throw QuadFieldError("splitting_type: bad prime ideal (internal)");
    }
    return out;
}

std::vector<IdealFactor> FieldK::factor_ideal(const QuadElem& x, const FactorBudget& budget) const {
    if (x.is_zero()) throw QuadFieldError("factor_ideal: zero element");
    Int n = abs(x.norm());
    std::vector<IdealFactor> out;
    if (n == 1) return out;
    PrimeFactorization pf = factor(n, budget);
    for (const auto& [p, e] : pf.factors) {
        PrimeSplitting ps = splitting_type(p);
        if (ps.type == SplitType::Inert) {
            if (e % 2 != 0) throw QuadFieldError("factor_ideal: odd inert exponent (internal)");
            out.push_back({p, SplitType::Inert, QuadIdeal{p, 0, p, D_}, static_cast<long>(e / 2)});
        } else if (ps.type == SplitType::Ramified) {
            out.push_back({p, SplitType::Ramified, *ps.prime, static_cast<long>(e)});
        } else {
            long m = std::min(valuation(x.w1, p), valuation(x.w2, p));
            if (p == 2) {
                // element divisibility by 2 also needs the parity condition
                while (m > 0 && !parity_ok(x.w1 >> static_cast<unsigned long>(m),
                                           x.w2 >> static_cast<unsigned long>(m), D_))
                    --m;
            }
            // after removing the rational content p^m, at most one of the two
            // conjugate primes divides what is left
            Int pm;
            mpz_pow_ui(pm.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(m));
            QuadElem xr = x.div_int(pm);
            long rest = static_cast<long>(e) - 2 * m;
            long vp = m, vq = m;
            if (rest > 0) {
                if (ps.prime->contains(xr))
                    vp += rest;
                else if (ps.prime->conj().contains(xr))
                    vq += rest;
                else
                    throw QuadFieldError("factor_ideal: split prime attribution failed (internal)");
            }
            if (vp > 0) out.push_back({p, SplitType::Split, *ps.prime, vp});
            if (vq > 0) out.push_back({p, SplitType::Split, ps.prime->conj(), vq});
        }
    }
    return out;
}

bool FieldK::is_principal(const QuadIdeal& a, QuadElem* gen) const {
    return D_ < 0 ? is_principal_imaginary(a, gen) : is_principal_real(a, gen);
}

bool FieldK::is_principal_imaginary(const QuadIdeal& a, QuadElem* gen) const {
    Int N = a.norm();
    Int w2max = isqrt(4 * N / (-D_));
    for (Int w2 = 0; w2 <= w2max; ++w2) {
        Int t = 4 * N + D_ * w2 * w2;
        Int w1;
        if (!perfect_square(t, &w1)) continue;
        for (int sign = 0; sign < (w1 == 0 ? 1 : 2); ++sign) {
            Int w1s = sign ? -w1 : w1;
            if (!parity_ok(w1s, w2, D_)) continue;
            QuadElem cand(w1s, w2, D_);
            if (cand.is_zero()) continue;
            if (a.contains(cand) && abs(cand.norm()) == N) {
                if (gen) *gen = cand;
                return true;
            }
        }
    }
    return false;
}

bool FieldK::is_principal_real(const QuadIdeal& a, QuadElem* gen) const {
    Int N = a.norm();
    double bound = std::sqrt(N.get_d()) * (std::exp(eps_log_) + 1.0) + 2.0;
    Int w2max(std::ceil(bound / std::sqrt(D_.get_d())) + 1);
    for (Int w2 = 0; w2 <= w2max; ++w2) {
        for (int nsign = 0; nsign < 2; ++nsign) {
            Int t = D_ * w2 * w2 + (nsign ? -4 * N : 4 * N);
            Int w1;
            if (!perfect_square(t, &w1)) continue;
            for (int sign = 0; sign < (w1 == 0 ? 1 : 2); ++sign) {
                Int w1s = sign ? -w1 : w1;
                if (!parity_ok(w1s, w2, D_)) continue;
                QuadElem cand(w1s, w2, D_);
                if (cand.is_zero()) continue;
                if (a.contains(cand) && abs(cand.norm()) == N) {
                    if (gen) *gen = cand;
                    return true;
                }
            }
        }
    }
    return false;
}

void FieldK::build_selmer() {
    selmer_basis_.clear();
    cl3_gens_.clear();
    unsigned dim = 0;
    if (D_ == -3) {
        selmer_basis_.push_back(QuadElem(-1, 1, D_));  // rho
        ++dim;
    } else if (D_ > 0) {
        selmer_basis_.push_back(*fundamental_unit_);
        ++dim;
    }
    // F3-basis of Cl(K)[3].
    std::vector<unsigned> order3;
    for (unsigned i = 0; i < class_reps_.size(); ++i)
        if (i != identity_class_ && cube_map_[i] == identity_class_ &&
            class_mul(class_mul(i, i), i) == identity_class_)
            order3.push_back(i);
    std::vector<unsigned> span{identity_class_};
    for (unsigned id : order3) {
        if (std::find(span.begin(), span.end(), id) != span.end()) continue;
        QuadIdeal q = split_representative(id);
        QuadElem gamma;
        if (!is_principal(q.pow(3), &gamma))
            throw QuadFieldError("selmer basis: cube of order-3 class not principal (internal)");
        cl3_gens_.push_back({q, gamma});
        selmer_basis_.push_back(gamma);
        ++dim;
        std::vector<unsigned> bigger;
        for (unsigned s : span)
            for (unsigned k = 0; k < 3; ++k) {
                unsigned t = s;
                for (unsigned j = 0; j < k; ++j) t = class_mul(t, id);
                bigger.push_back(t);
            }
        std::sort(bigger.begin(), bigger.end());
        bigger.erase(std::unique(bigger.begin(), bigger.end()), bigger.end());
        span = bigger;
    }
    selmer_order_ = 1;
    for (unsigned i = 0; i < dim; ++i) selmer_order_ *= 3;
}

bool FieldK::unit_log(const QuadElem& x, unsigned* torsion_index, long* eps_exp) const {
    if (x.is_zero()) return false;
    Int n = x.norm();
    if (n != 1 && n != -1) return false;
    QuadElem cur = x;
    long k = 0;
    if (D_ > 0) {
        const QuadElem& eps = *fundamental_unit_;
        auto size = [&](const QuadElem& e) {
            return std::abs(std::log(std::abs(e.w1.get_d() / 2.0 + e.w2.get_d() / 2.0 * std::sqrt(D_.get_d()))));
        };
        int guard = 0;
        while (!(abs(cur.w1) == 2 && cur.w2 == 0)) {
            double lg = std::log(std::abs(cur.w1.get_d() / 2.0 + cur.w2.get_d() / 2.0 * std::sqrt(D_.get_d())));
            QuadElem div = *cur.div_exact(eps);
            QuadElem mul = cur * eps;
            if (size(div) < size(mul)) {
                cur = div;
                ++k;
            } else {
                cur = mul;
                --k;
            }
            (void)lg;
            if (++guard > 100000) throw QuadFieldError("unit_log: runaway iteration");
        }
    }
    for (unsigned i = 0; i < torsion_units_.size(); ++i) {
        if (cur == torsion_units_[i]) {
            if (torsion_index) *torsion_index = i;
            if (eps_exp) *eps_exp = k;
            return true;
        }
    }
    return false;
}

bool FieldK::is_cube_elem(const QuadElem& x, const FactorBudget& budget) const {
    if (x.is_zero()) throw QuadFieldError("is_cube_elem: zero");
    auto factors = factor_ideal(x, budget);
    QuadIdeal q = QuadIdeal::whole_ring(D_);
    for (const auto& f : factors) {
        if (f.exponent % 3 != 0) return false;
        q = q * f.prime.pow(static_cast<unsigned>(f.exponent / 3));
    }
    QuadElem g;
    if (!is_principal(q, &g)) return false;
    auto eta = x.div_exact(g.pow(3));
    if (!eta) throw QuadFieldError("is_cube_elem: generator division failed (internal)");
    unsigned ti;
    long ke;
    if (!unit_log(*eta, &ti, &ke)) throw QuadFieldError("is_cube_elem: non-unit residue (internal)");
    if (D_ > 0) {
        return ke % 3 == 0;  // torsion is {+-1}, both cubes
    }
    if (D_ == -3) {
        // cubes among the sixth roots of unity are exactly +-1
        return torsion_units_[ti].w2 == 0;
    }
    return true;  // |U| = 2 or 4, coprime to 3
}

QuadElem FieldK::hilbert90_v(const QuadElem& u) const {
    if (u.is_zero()) throw QuadFieldError("hilbert90_v: zero");
    auto mu = exact_cbrt(u.norm());
    if (!mu) throw QuadFieldError("hilbert90_v: norm is not a cube");
    Int mu3 = (*mu) * (*mu) * (*mu);
    QuadElem v = u * u + QuadElem::integer(mu3, D_);
    if (v.is_zero()) v = QuadElem::sqrtD(D_);
    return v.primitive_part();
}

std::optional<QuadElem> exact_cbrt_in_K(const QuadElem& x) {
    if (x.is_zero()) return QuadElem(0, 0, x.D);
    auto n = exact_cbrt(x.norm());
    if (!n) return std::nullopt;
    // t = trace of the root satisfies t^3 - 3n t - Tr(x) = 0.
    const Int T = x.trace();
    Int absT = abs(T);
    Int rootT;
    mpz_root(rootT.get_mpz_t(), absT.get_mpz_t(), 3);
    // all real roots of t^3 - 3n t - T lie within sqrt(3|n|) + cbrt(|T|) + 2
    Int B = isqrt(abs(3 * *n)) + rootT + 2;
    auto f = [&](const Int& t) -> Int { return t * t * t - 3 * (*n) * t - T; };
    std::vector<Int> roots;
    auto bisect = [&](Int lo, Int hi, bool increasing) {
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
    };
    if (*n > 0) {
        // critical points at +-sqrt(n); integer points of [-(s-1), s-1] all lie
        // in the decreasing region, and the two outer pieces are increasing
        Int s = isqrt(*n) + 1;
        if (s > B) s = B;
        if (f(s) == 0) roots.push_back(s);
        if (f(-s) == 0) roots.push_back(-s);
        bisect(-B, -s, true);
        bisect(-(s - 1), s - 1, false);
        bisect(s, B, true);
    } else {
        bisect(-B, B, true);
    }
    for (const Int& t : roots) {
        Int disc = t * t - 4 * (*n);
        if (disc % x.D != 0) continue;
        Int s2 = disc / x.D;
        Int w2;
        if (!perfect_square(s2, &w2)) continue;
        for (int sign = 0; sign < (w2 == 0 ? 1 : 2); ++sign) {
            Int w2s = sign ? -w2 : w2;
            if (((t - w2s * x.D) % 2) != 0) continue;
            QuadElem cand(t, w2s, x.D);
            if (cand.pow(3) == x) return cand;
        }
    }
    return std::nullopt;
}

}  // namespace descent3
