#include "descent3/fuzz.hpp"

#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "descent3/descent.hpp"

namespace descent3 {

namespace {

const long kPrimes[6] = {2, 3, 5, 7, 11, 13};
const long kQuadD[5] = {-3, -4, 5, 12, -23};

struct Shard {
    unsigned long diag_cases = 0, diag_unknown = 0;
    unsigned long quad_cases = 0, quad_unknown = 0;
    std::vector<std::string> disagreements;
};

void fuzz_diagonal_prime(long pl, const FuzzConfig& cfg, Shard& out) {
    std::mt19937_64 rng(cfg.seed ^ (0x9e3779b97f4a7c15ull * static_cast<unsigned long>(pl)));
    Int p(pl);
    unsigned done = 0;
    unsigned long guard = 0;
    while (done < cfg.per_prime && guard++ < 50ul * cfg.per_prime) {
        long span = cfg.coeff_span;
        long u1 = static_cast<long>(rng() % (2 * span + 1)) - span;
        long u2 = static_cast<long>(rng() % (2 * span + 1)) - span;
        long u3 = static_cast<long>(rng() % (2 * span + 1)) - span;
        long c = static_cast<long>(rng() % (2 * span + 1)) - span;
        if (u1 == 0 || u2 == 0 || u3 == 0) continue;
        if (27 * u1 * u2 * u3 == c * c * c) continue;
        DiagonalCubic F{u1, u2, u3, c};
        LocalVerdict lemma = qp_soluble(F, p);
        OracleVerdict orc = oracle_qp(F.form(), p, cfg.oracle);
        ++out.diag_cases;
        if (orc.verdict == Verdict3::Unknown) {
            ++out.diag_unknown;
            continue;
        }
        ++done;
        if (lemma.verdict != orc.verdict) {
            std::ostringstream os;
            os << "diagonal p=" << pl << " F=(" << F.str() << ") lemma=" << lemma.rule << ":"
               << verdict_name(lemma.verdict) << " oracle=" << verdict_name(orc.verdict);
            out.disagreements.push_back(os.str());
        }
    }
}

std::optional<QuadElem> random_normal_form_v(std::mt19937_64& rng,
                                             const std::shared_ptr<const FieldK>& K) {
    const Int& D = K->D();
    for (int tries = 0; tries < 200; ++tries) {
        Int w1 = static_cast<long>(rng() % 41) - 20;
        Int w2 = static_cast<long>(rng() % 41) - 20;
        if ((w1 - w2 * D) % 2 != 0) continue;
        if (w1 == 0 && w2 == 0) continue;
        QuadElem v(w1, w2, D);
        if (v.norm() == 0) continue;
        v = v.div_int(v.content());
        Int n = abs(v.norm());
        bool split_only = true;
        if (n > 1) {
            for (const auto& [q, e] : factor(n).factors) {
                if (K->splitting_type(q).type != SplitType::Split) {
                    split_only = false;
                    break;
                }
            }
        }
        if (!split_only) continue;
        return v;
    }
    return std::nullopt;
}

void fuzz_quad(const FuzzConfig& cfg, Shard& out) {
    std::mt19937_64 rng(cfg.seed ^ 0xa5a5a5a5a5a5a5a5ull);
    unsigned done = 0;
    unsigned long guard = 0;
    size_t di = 0;
    while (done < cfg.quad_total && guard++ < 400ul * cfg.quad_total) {
        long Dv = kQuadD[di % 5];
        ++di;
        auto K = FieldK::make(Int(Dv));
        long a = static_cast<long>(rng() % 9) - 4;
        long b = 1 + static_cast<long>(rng() % 40);
        CurveModel E;
        try {
            auto n = normalize_model(Rat(Dv), Rat(a), Rat(b));
            E = n.curve;
        } catch (const SingularModelError&) {
            continue;
        }
        if (E.D != Dv) continue;  // normalization is allowed to move (a,b) but not D here
        auto v = random_normal_form_v(rng, K);
        if (!v) continue;
        long pl = kPrimes[rng() % 6];
        Int p(pl);
        LocalVerdict lemma;
        try {
            lemma = qp_soluble_quad(E, *v, p);
        } catch (const ArithError& e) {
            std::ostringstream os;
            os << "quad D=" << Dv << " curve=(" << E.a.get_str() << "," << E.b.get_str()
               << ") v=" << v->str() << " p=" << pl << " threw: " << e.what();
            out.disagreements.push_back(os.str());
            continue;
        }
        QuadTorsor T = build_cubic_dne1(E, *v);
        OracleVerdict orc = oracle_qp(T.integer_coefficients(), p, cfg.oracle);
        ++out.quad_cases;
        if (orc.verdict == Verdict3::Unknown || lemma.verdict == Verdict3::Unknown) {
            ++out.quad_unknown;
            continue;
        }
        ++done;
        if (lemma.verdict != orc.verdict) {
            std::ostringstream os;
            os << "quad D=" << Dv << " curve=(" << E.a.get_str() << "," << E.b.get_str()
               << ") v=" << v->str() << " p=" << pl << " lemma=" << lemma.rule << ":"
               << verdict_name(lemma.verdict) << " oracle=" << verdict_name(orc.verdict);
            out.disagreements.push_back(os.str());
        }
    }
}

}  // namespace

FuzzResult fuzz_differential(const FuzzConfig& cfg) {
    FuzzResult R;
    std::vector<Shard> shards(6);
    if (cfg.jobs > 1) {
        std::vector<std::thread> threads;
        for (int i = 0; i < 6; ++i)
            threads.emplace_back([&, i]() { fuzz_diagonal_prime(kPrimes[i], cfg, shards[i]); });
        for (auto& t : threads) t.join();
    } else {
        for (int i = 0; i < 6; ++i) fuzz_diagonal_prime(kPrimes[i], cfg, shards[i]);
    }
    Shard quad;
    fuzz_quad(cfg, quad);
    for (const auto& s : shards) {
        R.diag_cases += s.diag_cases;
        R.diag_unknown += s.diag_unknown;
        for (const auto& d : s.disagreements) R.disagreements.push_back(d);
    }
    R.quad_cases = quad.quad_cases;
    R.quad_unknown = quad.quad_unknown;
    for (const auto& d : quad.disagreements) R.disagreements.push_back(d);
    return R;
}

}  // namespace descent3
