#include "dyadic/errors.hpp"
#include "dyadic/operator.hpp"

namespace dyadic {

using nlohmann::json;

LinearOperator::LinearOperator(const TreeParams& params, VectorAction apply, VectorAction adjoint, json descriptor)
    : node_(std::make_shared<const Node>(Node{params, std::move(apply), std::move(adjoint), std::move(descriptor)})) {}

StepFunction LinearOperator::apply(const StepFunction& f) const {
    require_same(params(), f.params(), "apply");
    return StepFunction(params(), node_->apply(f.values()));
}

StepFunction LinearOperator::apply_adjoint(const StepFunction& g) const {
    require_same(params(), g.params(), "apply_adjoint");
    return StepFunction(params(), node_->adjoint(g.values()));
}

LinearOperator LinearOperator::adjoint() const {
    return LinearOperator(params(), node_->adjoint, node_->apply, json{{"adjoint", descriptor()}});
}

LinearOperator LinearOperator::with_descriptor(json d) const {
    return LinearOperator(params(), node_->apply, node_->adjoint, std::move(d));
}

LinearOperator identity(const TreeParams& params) {
    auto id = [](const Eigen::VectorXd& v) { return v; };
    return LinearOperator(params, id, id, json{{"identity", json::object()}});
}

LinearOperator zero_operator(const TreeParams& params) {
    auto z = [](const Eigen::VectorXd& v) { return Eigen::VectorXd::Zero(v.size()).eval(); };
    return LinearOperator(params, z, z, json{{"zero", json::object()}});
}

LinearOperator compose(const LinearOperator& S, const LinearOperator& T) {
    require_same(S.params(), T.params(), "compose");
    return LinearOperator(
        S.params(), [S, T](const Eigen::VectorXd& v) { return S.apply_values(T.apply_values(v)); },
        [S, T](const Eigen::VectorXd& v) { return T.adjoint_values(S.adjoint_values(v)); },
        json{{"compose", json::array({S.descriptor(), T.descriptor()})}});
}

LinearOperator compose(const std::vector<LinearOperator>& chain) {
    if (chain.empty()) throw InvalidArgument("compose needs at least one operator");
    LinearOperator out = chain.back();
    for (auto it = chain.rbegin() + 1; it != chain.rend(); ++it) out = compose(*it, out);
    return out;
}

LinearOperator add(const LinearOperator& S, const LinearOperator& T) {
    require_same(S.params(), T.params(), "add");
    return LinearOperator(
        S.params(), [S, T](const Eigen::VectorXd& v) { return (S.apply_values(v) + T.apply_values(v)).eval(); },
        [S, T](const Eigen::VectorXd& v) { return (S.adjoint_values(v) + T.adjoint_values(v)).eval(); },
        json{{"add", json::array({S.descriptor(), T.descriptor()})}});
}

LinearOperator subtract(const LinearOperator& S, const LinearOperator& T) {
    require_same(S.params(), T.params(), "subtract");
    return LinearOperator(
        S.params(), [S, T](const Eigen::VectorXd& v) { return (S.apply_values(v) - T.apply_values(v)).eval(); },
        [S, T](const Eigen::VectorXd& v) { return (S.adjoint_values(v) - T.adjoint_values(v)).eval(); },
        json{{"subtract", json::array({S.descriptor(), T.descriptor()})}});
}

LinearOperator scale(double c, const LinearOperator& T) {
    return LinearOperator(
        T.params(), [c, T](const Eigen::VectorXd& v) { return (c * T.apply_values(v)).eval(); },
        [c, T](const Eigen::VectorXd& v) { return (c * T.adjoint_values(v)).eval(); },
        json{{"scale", {{"c", c}, {"of", T.descriptor()}}}});
}

LinearOperator bracket(const LinearOperator& S, const LinearOperator& T) {
    require_same(S.params(), T.params(), "bracket");
    // [S,T]* = T*S* - S*T*
    return LinearOperator(
        S.params(),
        [S, T](const Eigen::VectorXd& v) {
            return (S.apply_values(T.apply_values(v)) - T.apply_values(S.apply_values(v))).eval();
        },
        [S, T](const Eigen::VectorXd& v) {
            return (T.adjoint_values(S.adjoint_values(v)) - S.adjoint_values(T.adjoint_values(v))).eval();
        },
        json{{"bracket", json::array({S.descriptor(), T.descriptor()})}});
}

LinearOperator multiplication(const StepFunction& b) {
    auto m = [w = b.values()](const Eigen::VectorXd& v) { return v.cwiseProduct(w).eval(); };
    return LinearOperator(b.params(), m, m, json{{"multiply", json::object()}});
}

}  // namespace dyadic
