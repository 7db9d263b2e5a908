#pragma once

#include <json.hpp>

#include "descent3/descent.hpp"

namespace descent3 {

nlohmann::json to_json(const SelmerComputation& S);
nlohmann::json to_json(const DescentReport& R);

std::string render_markdown(const DescentReport& R);
std::string csv_header();
std::string render_csv(const DescentReport& R);

// One row of a family sweep table.
struct FamilyRow {
    Int p;
    int p_mod9 = 0;
    std::string chi2;      // "1", "rho", or "-"
    std::string im_alpha;  // exact value or "lo..hi"
    std::string im_alphahat;
    std::string rank;
    std::string proved;  // "(P,P)" style: P proven exactly, I interval
    DescentReport report;
};

FamilyRow family_row(long k, const Int& p, const DescentOptions& opts);
std::string render_family_markdown(const std::vector<FamilyRow>& rows);
std::string render_family_csv(const std::vector<FamilyRow>& rows);
nlohmann::json family_json(const std::vector<FamilyRow>& rows);

}  // namespace descent3
