#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "dyadic/errors.hpp"
#include "dyadic/io.hpp"

namespace dyadic {

nlohmann::json to_json(const StepFunction& f, bool positive_marker) {
    nlohmann::json j;
    j["n"] = f.params().n();
    j["J"] = f.params().J();
    std::vector<double> v(f.values().data(), f.values().data() + f.values().size());
    j["values"] = v;
    if (positive_marker) j["positive"] = true;
    return j;
}

StepFunction step_function_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("J") || !j.contains("values"))
        throw InvalidArgument("step function JSON needs n, J and values");
    TreeParams p(j.at("n").get<int>(), j.at("J").get<int>());
    const auto v = j.at("values").get<std::vector<double>>();
    if (v.size() != p.cells()) throw InvalidArgument("values array has the wrong length");
    return StepFunction(p, Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

void write_csv(std::ostream& os, const StepFunction& f) {
    os << "index,value\n";
    for (std::size_t k = 0; k < f.size(); ++k) os << k << ',' << format_double(f[k]) << '\n';
}

StepFunction read_csv(std::istream& is, const TreeParams& params) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("index,value", 0) != 0) throw InvalidArgument("CSV header must be index,value");
    Eigen::VectorXd v = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(params.cells()), std::nan(""));
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw InvalidArgument("malformed CSV row: " + line);
        std::size_t idx = 0;
        double val = 0.0;
        try {
            idx = std::stoull(line.substr(0, comma));
            val = std::stod(line.substr(comma + 1));
        } catch (const std::exception&) {
            throw InvalidArgument("malformed CSV row: " + line);
        }
        if (idx >= params.cells()) throw InvalidArgument("CSV index out of range");
        v[static_cast<Eigen::Index>(idx)] = val;
    }
    for (Eigen::Index k = 0; k < v.size(); ++k)
        if (std::isnan(v[k])) throw InvalidArgument("CSV is missing cell " + std::to_string(k));
    return StepFunction(params, std::move(v));
}

}  // namespace dyadic
