#include <cmath>
#include <ostream>

#include "dyadic/io.hpp"
#include "dyadic/studies.hpp"

namespace dyadic {

using nlohmann::json;

namespace {

std::string cell(double v) { return std::isnan(v) ? std::string() : format_double(v); }

}  // namespace

void StudyTable::write_csv(std::ostream& os) const {
    const auto& cols = study_columns();
    for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c];
    os << '\n';
    for (const auto& r : rows) {
        os << cell(r.k) << ',' << cell(r.i) << ',' << cell(r.j) << ',' << cell(r.p) << ',' << cell(r.alpha) << ','
           << r.seed << ',' << cell(r.ap_mu) << ',' << cell(r.ap_lambda) << ',' << cell(r.ap_nu) << ','
           << cell(r.ap_w) << ',' << cell(r.bmo_b) << ',' << cell(r.bmo_nu_b) << ',' << cell(r.norm) << ','
           << cell(r.reference) << ',' << cell(r.ratio) << ',' << r.op << ',' << r.method << ',' << (r.trial < 0 ? std::string() : std::to_string(r.trial)) << '\n';
    }
}

json StudyTable::to_json() const {
    json out = json::array();
    for (const auto& r : rows) out.push_back(r.to_json());
    return json{{"metadata", metadata}, {"rows", out}};
}

}  // namespace dyadic
