#include "dyadic/descriptor.hpp"

#include "dyadic/calculus.hpp"
#include "dyadic/errors.hpp"
#include "dyadic/families.hpp"
#include "dyadic/haar.hpp"
#include "dyadic/paraproducts.hpp"
#include "dyadic/shift.hpp"

namespace dyadic {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw InvalidArgument("descriptor: " + what); }

/// Splits {"name": body} or "name" into (name, body).
std::pair<std::string, json> head(const json& j) {
    if (j.is_string()) return {j.get<std::string>(), json::object()};
    if (j.is_object() && j.size() == 1) return {j.begin().key(), j.begin().value()};
    bad("expected a string or a single-key object, got " + j.dump());
}

template <class T>
T field(const json& body, const char* key, T fallback) {
    if (!body.is_object() || !body.contains(key)) return fallback;
    try {
        return body.at(key).get<T>();
    } catch (const json::exception&) {
        bad(std::string("field '") + key + "' has the wrong type");
    }
}

const json& required(const json& body, const char* key) {
    if (!body.is_object() || !body.contains(key)) bad(std::string("missing field '") + key + "'");
    return body.at(key);
}

StepFunction symbol_field(const json& body, const char* key, const TreeParams& p) {
    if (!body.is_object() || !body.contains(key)) return log_symbol(p);
    return symbol_from_json(body.at(key), p);
}

std::vector<LinearOperator> operator_list(const json& body, const TreeParams& p, const char* name) {
    if (!body.is_array() || body.empty()) bad(std::string(name) + " expects a non-empty array");
    std::vector<LinearOperator> out;
    for (const auto& e : body) out.push_back(operator_from_json(e, p));
    return out;
}

ShiftData shift_data(const json& body, const TreeParams& p) {
    return random_shift(p, field<int>(body, "i", 0), field<int>(body, "j", 0), field<std::uint64_t>(body, "seed", 0),
                        field<bool>(body, "cancellative", true));
}

LinearOperator build(const std::string& name, const json& body, const TreeParams& p) {
    if (name == "identity") return identity(p);
    if (name == "zero") return zero_operator(p);
    if (name == "shift") return shift(shift_data(body, p));
    if (name == "shift00") return noncancellative_shift00(p, field<std::uint64_t>(body, "seed", 0)).op();
    if (name == "martingale") {
        if (body.is_object() && body.contains("constant"))
            return martingale(MartingaleSigns::constant(p, field<double>(body, "constant", 1.0)));
        return martingale(MartingaleSigns::random(p, field<std::uint64_t>(body, "seed", 0)));
    }
    if (name == "pi") return pi(symbol_field(body, "symbol", p));
    if (name == "pi_star") return pi_star(symbol_field(body, "symbol", p));
    if (name == "gamma") return gamma(symbol_field(body, "symbol", p));
    if (name == "frak_p") return frak_p(symbol_field(body, "symbol", p));
    if (name == "multiply") return multiplication(symbol_field(body, "symbol", p));
    if (name == "averaging") return averaging_multiplier(symbol_field(body, "symbol", p));
    if (name == "lambda") return lambda(symbol_field(body, "a", p), symbol_field(body, "b", p));
    if (name == "lambda_tilde") return lambda_tilde(symbol_field(body, "a", p), symbol_field(body, "b", p));
    if (name == "u") return u_operator(symbol_field(body, "symbol", p), field<int>(body, "j", 1));
    if (name == "theta" || name == "commutator") {
        const int k = field<int>(body, "k", 1);
        const StepFunction b = symbol_field(body, "b", p);
        const LinearOperator T = operator_from_json(required(body, "of"), p);
        if (k < 0 || (name == "commutator" && k < 1)) bad(name + " needs k >= " + (name == "theta" ? "0" : "1"));
        return name == "theta" ? theta_iter(b, T, k) : commutator_iter(b, T, k);
    }
    if (name == "theta_closed_form")
        return theta_shift_closed_form(symbol_field(body, "b", p), shift_data(required(body, "shift"), p),
                                       field<int>(body, "k", 1));
    if (name == "compose") return compose(operator_list(body, p, "compose"));
    if (name == "add") {
        auto ops = operator_list(body, p, "add");
        LinearOperator acc = ops.front();
        for (std::size_t k = 1; k < ops.size(); ++k) acc = add(acc, ops[k]);
        return acc;
    }
    if (name == "bracket") {
        auto ops = operator_list(body, p, "bracket");
        if (ops.size() != 2) bad("bracket expects two operators");
        return bracket(ops[0], ops[1]);
    }
    if (name == "scale") return scale(field<double>(body, "c", 1.0), operator_from_json(required(body, "of"), p));
    if (name == "adjoint") return operator_from_json(body, p).adjoint();
    bad("unknown operator '" + name + "'");
}

}  // namespace

StepFunction symbol_from_json(const json& j, const TreeParams& p) {
    if (j.is_number()) return StepFunction::constant(p, j.get<double>());
    const auto [name, body] = head(j);
    if (name == "log") return log_symbol(p, false);
    if (name == "log0") return log_symbol(p, true);
    if (name == "random")
        return random_bmo_symbol(field<std::uint64_t>(body, "seed", 0), p, SymbolTarget::unweighted()).b;
    if (name == "constant") {
        if (!body.is_number()) bad("constant expects a number");
        return StepFunction::constant(p, body.get<double>());
    }
    if (name == "haar") {
        const int g = field<int>(body, "g", 0);
        const auto m = field<std::vector<std::uint32_t>>(body, "m", std::vector<std::uint32_t>(p.n(), 0));
        const auto eps = field<std::vector<int>>(body, "eps", std::vector<int>(p.n(), 0));
        if (static_cast<int>(eps.size()) != p.n()) bad("haar eps has the wrong length");
        const DyadicCube Q{g, m};
        validate_cube(p, Q);
        return haar_function(p, Q, Signature::from_vector(eps));
    }
    if (name == "values") {
        if (!body.is_array() || body.size() != p.cells()) bad("values must list one number per cell");
        Eigen::VectorXd v(static_cast<Eigen::Index>(p.cells()));
        for (std::size_t k = 0; k < p.cells(); ++k) v[static_cast<Eigen::Index>(k)] = body[k].get<double>();
        return StepFunction(p, std::move(v));
    }
    bad("unknown symbol '" + name + "'");
}

LinearOperator operator_from_json(const json& j, const TreeParams& p) {
    const auto [name, body] = head(j);
    return build(name, body, p).with_descriptor(j);
}

}  // namespace dyadic
