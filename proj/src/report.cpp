#include "descent3/report.hpp"

#include <sstream>

namespace descent3 {

using nlohmann::json;

namespace {

json triple_json(const std::array<Int, 3>& t) {
    return json::array({t[0].get_str(), t[1].get_str(), t[2].get_str()});
}

std::string bound_str(unsigned long lo, unsigned long hi) {
    if (lo == hi) return std::to_string(lo);
    return std::to_string(lo) + ".." + std::to_string(hi);
}

}  // namespace

json to_json(const SelmerComputation& S) {
    json j;
    j["curve"] = {{"D", S.curve.D.get_str()}, {"a", S.curve.a.get_str()}, {"b", S.curve.b.get_str()}};
    j["sel_card"] = S.sel_card;
    j["img_lower"] = S.img_lower;
    j["closure_ok"] = S.closure_ok;
    if (!S.notes.empty()) j["notes"] = S.notes;
    if (S.curve.D == 1) {
        json cands = json::array();
        for (const auto& c : S.d1_candidates) {
            json e;
            e["u"] = c.u.representative.get_str();
            e["u1"] = c.u.u1.get_str();
            e["u2"] = c.u.u2.get_str();
            e["status"] = status_name(c.status);
            if (c.fails_at) e["fails_at"] = c.fails_at->get_str();
            if (c.solution) e["solution"] = triple_json(*c.solution);
            if (!c.provenance.empty()) e["via"] = c.provenance;
            cands.push_back(std::move(e));
        }
        j["candidates"] = std::move(cands);
    } else {
        j["s3_order"] = S.s3_order;
        j["TS_order"] = S.TS_order;
        j["TG_order"] = S.TG_order;
        j["sel_ideal_order"] = S.sel_ideal_order;
        j["img_ideal_order"] = S.img_ideal_order;
        json s3 = json::array();
        for (const auto& c : S.s3_classes) {
            json e;
            e["t"] = c.t;
            e["v"] = c.v.str();
            e["status"] = status_name(c.status);
            if (c.fails_at) e["fails_at"] = c.fails_at->get_str();
            if (c.solution) e["solution"] = triple_json(*c.solution);
            if (!c.provenance.empty()) e["via"] = c.provenance;
            s3.push_back(std::move(e));
        }
        j["s3_classes"] = std::move(s3);
        json cands = json::array();
        for (const auto& c : S.ideal_candidates) {
            json e;
            e["x"] = c.x;
            e["class_is_cube"] = c.class_is_cube;
            e["u"] = c.u.str();
            e["status"] = status_name(c.status);
            e["els_twist"] = c.els_twist;
            if (c.solution) e["solution"] = triple_json(*c.solution);
            if (!c.provenance.empty()) e["via"] = c.provenance;
            if (c.uniqueness_violation) e["uniqueness_violation"] = true;
            cands.push_back(std::move(e));
        }
        j["ideal_candidates"] = std::move(cands);
    }
    return j;
}

json to_json(const DescentReport& R) {
    json j;
    j["curve"] = {{"D", R.curve.D.get_str()}, {"a", R.curve.a.get_str()}, {"b", R.curve.b.get_str()}};
    j["dual"] = {{"D", R.dual.D.get_str()}, {"a", R.dual.a.get_str()}, {"b", R.dual.b.get_str()}};
    j["delta"] = R.delta;
    j["alpha"] = to_json(R.alpha);
    j["alphahat"] = to_json(R.alphahat);
    j["r_lo"] = R.r_lo;
    j["r_hi"] = R.r_hi;
    j["sha3_hint"] = R.sha3_hint;
    j["annotations"] = R.annotations;
    return j;
}

std::string render_markdown(const DescentReport& R) {
    std::ostringstream os;
    os << "## " << R.curve.str() << "\n\n";
    os << "dual: " << R.dual.str() << "\n\n";
    os << "| quantity | value |\n|---|---|\n";
    os << "| delta | " << R.delta << " |\n";
    os << "| Sel(alpha) | " << R.alpha.sel_card << " |\n";
    os << "| Im(alpha) proven | " << R.alpha.img_lower << " |\n";
    os << "| Sel(alphahat) | " << R.alphahat.sel_card << " |\n";
    os << "| Im(alphahat) proven | " << R.alphahat.img_lower << " |\n";
    os << "| rank | " << bound_str(R.r_lo, R.r_hi) << " |\n";
    if (R.sha3_hint) os << "\nSome ELS classes stayed unresolved at the search bound.\n";
    for (const auto& a : R.annotations) os << "- " << a << "\n";
    return os.str();
}

std::string csv_header() { return "D,a,b,delta,sel_alpha,img_alpha,sel_alphahat,img_alphahat,r_lo,r_hi"; }

std::string render_csv(const DescentReport& R) {
    std::ostringstream os;
    os << R.curve.D.get_str() << "," << R.curve.a.get_str() << "," << R.curve.b.get_str() << ","
       << R.delta << "," << R.alpha.sel_card << "," << R.alpha.img_lower << ","
       << R.alphahat.sel_card << "," << R.alphahat.img_lower << "," << R.r_lo << "," << R.r_hi;
    return os.str();
}

FamilyRow family_row(long k, const Int& p, const DescentOptions& opts) {
    FamilyRow row;
    row.p = p;
    row.p_mod9 = static_cast<int>(mod_positive(p, 9).get_si());
    if (p % 3 == 1) {
        row.chi2 = is_cube_mod_p(2, p) ? "1" : "rho";
    } else {
        row.chi2 = "-";
    }
    CurveModel E = normalize_model(Rat(1), Rat(0), Rat(k) * Rat(p)).curve;
    row.report = rank_bounds(E, opts);
    row.im_alpha = bound_str(row.report.alpha.img_lower, row.report.alpha.sel_card);
    row.im_alphahat = bound_str(row.report.alphahat.img_lower, row.report.alphahat.sel_card);
    row.rank = bound_str(static_cast<unsigned long>(row.report.r_lo),
                         static_cast<unsigned long>(row.report.r_hi));
    std::string a_tag = row.report.alpha.img_lower == row.report.alpha.sel_card ? "P" : "I";
    std::string b_tag = row.report.alphahat.img_lower == row.report.alphahat.sel_card ? "P" : "I";
    row.proved = "(" + a_tag + "," + b_tag + ")";
    return row;
}

std::string render_family_markdown(const std::vector<FamilyRow>& rows) {
    std::ostringstream os;
    os << "| p | p mod 9 | chi2(p) | #Im(alpha) | #Im(alphahat) | rank | status |\n";
    os << "|---|---|---|---|---|---|---|\n";
    for (const auto& r : rows)
        os << "| " << r.p.get_str() << " | " << r.p_mod9 << " | " << r.chi2 << " | " << r.im_alpha
           << " | " << r.im_alphahat << " | " << r.rank << " | " << r.proved << " |\n";
    return os.str();
}

std::string render_family_csv(const std::vector<FamilyRow>& rows) {
    std::ostringstream os;
    os << "p,p_mod9,chi2,im_alpha,im_alphahat,rank,status\n";
    for (const auto& r : rows)
        os << r.p.get_str() << "," << r.p_mod9 << "," << r.chi2 << "," << r.im_alpha << ","
           << r.im_alphahat << "," << r.rank << "," << r.proved << "\n";
    return os.str();
}

nlohmann::json family_json(const std::vector<FamilyRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        json e;
        e["p"] = r.p.get_str();
        e["p_mod9"] = r.p_mod9;
        e["chi2"] = r.chi2;
        e["im_alpha"] = r.im_alpha;
        e["im_alphahat"] = r.im_alphahat;
        e["rank"] = r.rank;
        e["status"] = r.proved;
        arr.push_back(std::move(e));
    }
    return arr;
}

}  // namespace descent3
