#include "descent3/descent.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace descent3 {

namespace {

std::vector<int> mod3(std::vector<int> v) {
    for (auto& x : v) x = ((x % 3) + 3) % 3;
    return v;
}

std::vector<int> add3(std::vector<int> a, const std::vector<int>& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] = (a[i] + b[i]) % 3;
    return a;
}

std::vector<int> neg3(std::vector<int> v) {
    for (auto& x : v) x = (3 - x) % 3;
    return v;
}

}  // namespace

bool F3Space::add(std::vector<int> v) {
    v = mod3(std::move(v));
    for (const auto& r : rows) {
        // eliminate the pivot of r from v
        size_t piv = 0;
        while (piv < r.size() && r[piv] == 0) ++piv;
        if (piv == r.size()) continue;
        int coeff = v[piv] * (r[piv] == 1 ? 1 : 2) % 3;  // v[piv]/r[piv]
        if (coeff)
            for (size_t i = 0; i < v.size(); ++i) v[i] = ((v[i] - coeff * r[i]) % 3 + 3) % 3;
    }
    if (std::all_of(v.begin(), v.end(), [](int x) { return x == 0; })) return false;
    rows.push_back(v);
    return true;
}

bool F3Space::contains(std::vector<int> v) const {
    F3Space copy = *this;
    return !copy.add(std::move(v));
}

unsigned long F3Space::order() const {
    unsigned long r = 1;
    for (size_t i = 0; i < rows.size(); ++i) r *= 3;
    return r;
}

// ---------------------------------------------------------------------------
// Candidate enumeration, D = 1

std::vector<CubeClass> candidates_d1(const CurveModel& E, const FactorBudget& budget) {
    if (E.D != 1) throw ArithError("candidates_d1: D != 1");
    PrimeFactorization f2b = factor(2 * E.b, budget);
    std::vector<Int> primes;
    for (const auto& [p, e] : f2b.factors) primes.push_back(p);
    size_t np = primes.size();
    std::map<Int, CubeClass> seen;  // representative -> class, after inversion dedup
    for (unsigned long mask = 0; mask < (1ul << np); ++mask) {
        // squarefree divisor s of 2b; split s = u1 * u2 in all ways
        std::vector<Int> sprimes;
        for (size_t i = 0; i < np; ++i)
            if (mask & (1ul << i)) sprimes.push_back(primes[i]);
        size_t k = sprimes.size();
        for (unsigned long pick = 0; pick < (1ul << k); ++pick) {
            CubeClass c;
            c.u1 = 1;
            c.u2 = 1;
            for (size_t i = 0; i < k; ++i) {
                if (pick & (1ul << i))
                    c.u1 *= sprimes[i];
                else
                    c.u2 *= sprimes[i];
            }
            c.representative = c.u1 * c.u1 * c.u2;
            Int inv_rep = c.u2 * c.u2 * c.u1;  // representative of the inverse class
            if (inv_rep < c.representative) continue;  // keep the smaller of the pair
            seen.emplace(c.representative, c);
        }
    }
    std::vector<CubeClass> out;
    for (auto& [rep, c] : seen) out.push_back(c);
    return out;
}

// ---------------------------------------------------------------------------
// Candidate enumeration, D != 1 (steps 2 and 3)

namespace {

QuadElem primitive_scaled(const QuadElem& v) {
    return v.div_int(v.content());
}

}  // namespace

std::vector<IdealCandidate> candidates_ideal(const CurveModel& E,
                                             const std::shared_ptr<const FieldK>& K,
                                             const FactorBudget& budget) {
    if (E.D == 1) throw ArithError("candidates_ideal: D = 1");
    PrimeFactorization f2b = factor(2 * E.b, budget);
    std::vector<std::pair<QuadIdeal, int>> split_primes;  // (prime ideal, v_i)
    std::vector<Int> split_p;
    for (const auto& [p, e] : f2b.factors) {
        PrimeSplitting ps = K->splitting_type(p);
        if (ps.type == SplitType::Split) {
            split_primes.emplace_back(*ps.prime, static_cast<int>(std::min<unsigned>(e, 2)));
            split_p.push_back(p);
        }
    }
    size_t s = split_primes.size();
    std::vector<IdealCandidate> out;
    std::vector<int> x(s, 0);
    // enumerate x in {-1,0,1}^s, keeping the lexicographically-first of {x, -x}
    auto advance = [&]() {
        for (size_t i = 0; i < s; ++i) {
            if (x[i] < 1) {
                ++x[i];
                std::fill(x.begin(), x.begin() + i, -1);
                return true;
            }
        }
        return false;
    };
    for (;;) {
        bool canonical = true;
        for (size_t i = s; i-- > 0;) {
            if (x[i] > 0) break;
            if (x[i] < 0) {
                canonical = false;
                break;
            }
        }
        // keep x whose last nonzero entry is +1 (or x = 0)
        if (canonical) {
            IdealCandidate cand;
            cand.x = x;
            cand.vec.resize(s);
            QuadIdeal v = QuadIdeal::whole_ring(E.D);
            for (size_t i = 0; i < s; ++i) {
                cand.vec[i] = ((x[i] * split_primes[i].second) % 3 + 3) % 3;
                if (x[i] == 1)
                    v = v * split_primes[i].first.pow(static_cast<unsigned>(split_primes[i].second));
                else if (x[i] == -1)
                    v = v * split_primes[i].first.conj().pow(
                                static_cast<unsigned>(split_primes[i].second));
            }
            cand.ideal = v;
            unsigned cls = K->class_id(v);
            unsigned inv_cls = K->class_id(v.conj());
            auto root = K->class_cuberoot(inv_cls);
            if (!root) {
                cand.class_is_cube = false;
                cand.u = QuadElem::one(E.D);
            } else {
                cand.class_is_cube = true;
                QuadIdeal c = K->split_representative(*root);
                QuadElem gen;
                if (!K->is_principal(v * c.pow(3), &gen))
                    throw QuadFieldError("candidates_ideal: v * c^3 not principal (internal)");
                cand.u = primitive_scaled(gen);
            }
            (void)cls;
            out.push_back(std::move(cand));
        }
        if (!advance()) break;
    }
    // deterministic order: by |vec| then entries
    std::sort(out.begin(), out.end(), [](const IdealCandidate& a, const IdealCandidate& b) {
        return a.x < b.x;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Selmer computation

namespace {

bool quad_class_equal(const std::shared_ptr<const FieldK>& K, const QuadElem& a,
                      const QuadElem& b, const FactorBudget& budget) {
    // [a] = [b] in K*/K*^3 iff a*b^2 is a cube
    QuadElem q = a * b * b;
    if (q.is_zero()) throw ArithError("quad_class_equal: zero");
    return K->is_cube_elem(q, budget);
}

void selmer_d1(SelmerComputation& S, const CurveModel& E, const DescentOptions& opts) {
    auto cands = candidates_d1(E, opts.budget);
    PrimeFactorization f2b = factor(2 * E.b, opts.budget);
    std::vector<Int> primes;
    for (const auto& [p, e] : f2b.factors) primes.push_back(p);
    auto vec_of = [&](const CubeClass& u) {
        std::vector<int> v(primes.size(), 0);
        for (size_t i = 0; i < primes.size(); ++i)
            v[i] = static_cast<int>((2 * valuation(u.u1, primes[i]) + valuation(u.u2, primes[i])) % 3);
        return v;
    };

    // torsion classes
    CubeClass torsion = split_square_cube(Rat(1) / Rat(2 * E.b), opts.budget);
    CubeClass torsion_inv = cube_class_inv(torsion, opts.budget);

    // found rational points
    auto pts = search_curve_points(E, opts.point_search_bound);
    std::vector<Int> point_classes;
    for (const auto& P : pts) point_classes.push_back(alpha_d1(E, P, opts.budget).representative);

    for (auto& u : cands) {
        D1Candidate c;
        c.u = u;
        auto els = els_d1(E, u, opts.els);
        if (!els.els) {
            c.status = CandidateStatus::NotELS;
            c.fails_at = els.fails_at;
            S.d1_candidates.push_back(std::move(c));
            continue;
        }
        c.status = CandidateStatus::ELSUnresolved;
        D1Torsor T = build_cubic_d1(E, u);
        if (u.is_trivial()) {
            c.status = CandidateStatus::Global;
            c.solution = {{Int(1), Int(-1), Int(0)}};
            c.provenance = "unit";
        } else if (u.representative == torsion.representative ||
                   u.representative == torsion_inv.representative) {
            c.status = CandidateStatus::Global;
            RationalPoint T3 = RationalPoint::affine(
                Rat(0), u.representative == torsion.representative ? Rat(E.b) : Rat(-E.b));
            c.solution = {solution_from_point_d1(T, T3)};
            c.provenance = "torsion";
        }
        if (c.status != CandidateStatus::Global) {
            CubeClass uinv = cube_class_inv(u, opts.budget);
            for (size_t i = 0; i < pts.size() && c.status != CandidateStatus::Global; ++i) {
                if (point_classes[i] == u.representative ||
                    point_classes[i] == uinv.representative) {
                    c.status = CandidateStatus::Global;
                    c.provenance = "point-search";
                    if (point_classes[i] == u.representative)
                        c.solution = {solution_from_point_d1(T, pts[i])};
                }
            }
        }
        if (c.status != CandidateStatus::Global) {
            auto sr = search_cubic(integer_form(T.cubic.coefficients()), opts.search_bound);
            if (sr.found) {
                c.status = CandidateStatus::Global;
                c.solution = sr.found;
                c.provenance = "cubic-search";
            }
        }
        S.d1_candidates.push_back(std::move(c));
    }

    // F3 bookkeeping
    std::set<std::vector<int>> els_set{std::vector<int>(primes.size(), 0)};
    F3Space img;
    img.rows.clear();
    for (const auto& c : S.d1_candidates) {
        if (c.status == CandidateStatus::NotELS) continue;
        auto v = vec_of(c.u);
        els_set.insert(v);
        els_set.insert(neg3(v));
        if (c.status == CandidateStatus::Global) img.add(v);
    }
    // group-law closure of the ELS statuses
    S.closure_ok = true;
    for (const auto& a : els_set)
        for (const auto& b : els_set)
            if (!els_set.count(add3(a, b))) S.closure_ok = false;
    if (!S.closure_ok)
        S.notes.push_back("ELS candidate set is not closed under the group law (diagnostic)");
    S.sel_card = els_set.size();
    S.img_lower = img.order();
}

void selmer_quad(SelmerComputation& S, const CurveModel& E, const DescentOptions& opts) {
    auto K = FieldK::make(E.D, opts.budget);
    S.s3_order = K->selmer3_order();
    const auto& basis = K->selmer3_basis();
    unsigned d = static_cast<unsigned>(basis.size());

    auto pts = search_curve_points(E, opts.point_search_bound);
    std::vector<QuadElem> point_alpha;
    for (const auto& P : pts)
        if (!P.at_infinity) point_alpha.push_back(alpha_quad(E, P));

    auto elem_of = [&](const std::vector<int>& t) {
        QuadElem g = QuadElem::one(E.D);
        for (unsigned i = 0; i < d; ++i)
            for (int j = 0; j < t[i]; ++j) g = g * basis[i];
        return primitive_scaled(g);
    };

    // --- step 1: T_S and T_G over S3(K)
    std::vector<std::vector<int>> all_t;  // nonzero orbit representatives
    {
        std::vector<int> t(d, 0);
        auto bump = [&]() {
            for (unsigned i = 0; i < d; ++i) {
                if (t[i] < 2) {
                    ++t[i];
                    std::fill(t.begin(), t.begin() + i, 0);
                    return true;
                }
            }
            return false;
        };
        while (bump()) {
            auto n = neg3(t);
            if (std::find(all_t.begin(), all_t.end(), n) == all_t.end()) all_t.push_back(t);
        }
    }
    std::set<std::vector<int>> TS_set{std::vector<int>(d, 0)};
    F3Space TG;
    for (const auto& t : all_t) {
        S3Status st;
        st.t = t;
        st.v = elem_of(t);
        auto els = els_quad(E, st.v, opts.els);
        if (!els.els) {
            st.status = CandidateStatus::NotELS;
            st.fails_at = els.fails_at;
        } else {
            st.status = CandidateStatus::ELSUnresolved;
            for (size_t i = 0; i < point_alpha.size(); ++i) {
                QuadElem cls = st.v * st.v * st.v.conj();
                if (quad_class_equal(K, point_alpha[i], cls, opts.budget)) {
                    st.status = CandidateStatus::Global;
                    st.provenance = "point-search";
                    break;
                }
                if (quad_class_equal(K, point_alpha[i], cls * cls, opts.budget)) {
                    st.status = CandidateStatus::Global;  // inverse class: same orbit
                    st.provenance = "point-search";
                    break;
                }
            }
            if (st.status != CandidateStatus::Global) {
                QuadTorsor T = build_cubic_dne1(E, st.v);
                auto sr = search_cubic(T.integer_coefficients(), opts.search_bound);
                if (sr.found) {
                    st.status = CandidateStatus::Global;
                    st.solution = sr.found;
                    st.provenance = "cubic-search";
                }
            }
            TS_set.insert(t);
            TS_set.insert(neg3(t));
            if (st.status == CandidateStatus::Global) TG.add(t);
        }
        S.s3_classes.push_back(std::move(st));
    }
    // closure diagnostic on T_S
    for (const auto& a : TS_set)
        for (const auto& b : TS_set)
            if (!TS_set.count(add3(a, b))) {
                S.closure_ok = false;
                S.notes.push_back("T_S is not closed under the group law (diagnostic)");
            }
    S.TS_order = static_cast<unsigned>(TS_set.size());
    S.TG_order = static_cast<unsigned>(TG.order());

    // coset representatives R_S of S3/T_S and R_G of T_S/T_G
    std::vector<std::vector<int>> RS, RG;
    {
        std::set<std::vector<int>> seen;
        std::vector<int> t(d, 0);
        auto bump = [&]() {
            for (unsigned i = 0; i < d; ++i) {
                if (t[i] < 2) {
                    ++t[i];
                    std::fill(t.begin(), t.begin() + i, 0);
                    return true;
                }
            }
            return false;
        };
        do {
            // canonical coset key: sorted list of coset elements
            std::vector<std::vector<int>> coset;
            for (const auto& w : TS_set) coset.push_back(add3(t, w));
            std::sort(coset.begin(), coset.end());
            if (!seen.count(coset.front())) {
                seen.insert(coset.front());
                RS.push_back(t);
            }
        } while (bump());
        std::set<std::vector<int>> seenG;
        for (const auto& w : TS_set) {
            // coset of w modulo T_G inside T_S
            std::vector<std::vector<int>> coset;
            for (const auto& g : TS_set)
                if (TG.contains(add3(g, neg3(w)))) coset.push_back(g);
            std::sort(coset.begin(), coset.end());
            if (!coset.empty() && !seenG.count(coset.front())) {
                seenG.insert(coset.front());
                RG.push_back(w);
            }
        }
    }

    // --- steps 2-5: ideal candidates and twisting
    auto cands = candidates_ideal(E, K, opts.budget);
    std::set<std::vector<int>> sel_set;
    F3Space IG;
    size_t svec = cands.empty() ? 0 : cands.front().vec.size();
    sel_set.insert(std::vector<int>(svec, 0));
    for (auto& cand : cands) {
        bool trivial_x = std::all_of(cand.x.begin(), cand.x.end(), [](int v) { return v == 0; });
        if (!cand.class_is_cube) {
            cand.provenance = "excluded: ideal class is not a cube";
            continue;
        }
        if (trivial_x) {
            cand.status = CandidateStatus::Global;
            cand.els_twist = 0;
            cand.provenance = "unit";
            continue;
        }
        int hits = 0;
        for (size_t i = 0; i < RS.size(); ++i) {
            QuadElem vt = primitive_scaled(cand.u * elem_of(RS[i]));
            auto els = els_quad(E, vt, opts.els);
            if (!els.els) continue;
            ++hits;
            if (cand.els_twist < 0) {
                cand.els_twist = static_cast<int>(i);
                cand.status = CandidateStatus::ELSUnresolved;
                // global hunt over R_G
                for (size_t g = 0; g < RG.size() && cand.status != CandidateStatus::Global; ++g) {
                    QuadElem vg = primitive_scaled(vt * elem_of(RG[g]));
                    QuadElem cls = vg * vg * vg.conj();
                    for (size_t pi = 0; pi < point_alpha.size(); ++pi) {
                        if (quad_class_equal(K, point_alpha[pi], cls, opts.budget)) {
                            cand.status = CandidateStatus::Global;
                            cand.global_twist = static_cast<int>(g);
                            cand.provenance = "point-search";
                            break;
                        }
                    }
                    if (cand.status != CandidateStatus::Global) {
                        QuadTorsor T = build_cubic_dne1(E, vg);
                        auto sr = search_cubic(T.integer_coefficients(), opts.search_bound);
                        if (sr.found) {
                            cand.status = CandidateStatus::Global;
                            cand.global_twist = static_cast<int>(g);
                            cand.solution = sr.found;
                            cand.provenance = "cubic-search";
                        }
                    }
                }
            }
        }
        if (hits > 1) {
            cand.uniqueness_violation = true;
            S.notes.push_back("more than one ELS twist among R_S representatives (diagnostic)");
        }
        if (cand.status != CandidateStatus::NotELS) {
            sel_set.insert(cand.vec);
            sel_set.insert(neg3(cand.vec));
            if (cand.status == CandidateStatus::Global) IG.add(cand.vec);
        }
    }
    for (const auto& a : sel_set)
        for (const auto& b : sel_set)
            if (!sel_set.count(add3(a, b))) {
                S.closure_ok = false;
                S.notes.push_back("Sel(alpha^i) set is not closed under the group law (diagnostic)");
            }
    S.ideal_candidates = std::move(cands);
    S.sel_ideal_order = static_cast<unsigned>(sel_set.size());
    S.img_ideal_order = static_cast<unsigned>(IG.order());
    S.sel_card = static_cast<unsigned long>(S.sel_ideal_order) * S.TS_order;
    S.img_lower = static_cast<unsigned long>(S.img_ideal_order) * S.TG_order;
}

}  // namespace

SelmerComputation selmer_and_image(const CurveModel& E, const DescentOptions& opts) {
    SelmerComputation S;
    S.curve = E;
    if (E.D == 1)
        selmer_d1(S, E, opts);
    else
        selmer_quad(S, E, opts);
    return S;
}

namespace {

int log3_exact(unsigned long n, bool* ok) {
    int k = 0;
    while (n % 3 == 0) {
        n /= 3;
        ++k;
    }
    *ok = (n == 1);
    return k;
}

}  // namespace

DescentReport rank_bounds(const CurveModel& E, const DescentOptions& opts) {
    DescentReport R;
    R.curve = E;
    R.dual = dual_curve(E).curve;
    R.delta = E.delta();
    R.alpha = selmer_and_image(E, opts);
    R.alphahat = selmer_and_image(R.dual, opts);
    bool ok1 = false, ok2 = false;
    int hi = log3_exact(R.alpha.sel_card * R.alphahat.sel_card, &ok1);
    int lo = log3_exact(R.alpha.img_lower * R.alphahat.img_lower, &ok2);
    if (!ok1 || !ok2)
        R.annotations.push_back("Selmer/image cardinalities are not powers of 3 (diagnostic)");
    R.r_hi = std::max(0, hi - R.delta);
    R.r_lo = std::max(0, std::min(lo - R.delta, R.r_hi));
    R.sha3_hint = R.r_lo < R.r_hi;
    if (R.sha3_hint)
        R.annotations.push_back(
            "unresolved ELS classes may correspond to nontrivial elements of the 3-part of Sha");
    for (const auto& n : R.alpha.notes) R.annotations.push_back("alpha: " + n);
    for (const auto& n : R.alphahat.notes) R.annotations.push_back("alphahat: " + n);
    return R;
}

}  // namespace descent3
