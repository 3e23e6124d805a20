#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <nlohmann/json.hpp>

#include "dyadic/step_function.hpp"

namespace dyadic {

/// Action on row-major cell values.
using VectorAction = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Immutable handle to a linear operator on the step functions of one tree.
///
/// Every operator carries its L^2 adjoint, so transposes and adjoint norms never need a
/// dense matrix. Copies share the same node.
class LinearOperator {
public:
    LinearOperator(const TreeParams& params, VectorAction apply, VectorAction adjoint, nlohmann::json descriptor);

    const TreeParams& params() const { return node_->params; }
    const nlohmann::json& descriptor() const { return node_->descriptor; }

    StepFunction apply(const StepFunction& f) const;
    StepFunction operator()(const StepFunction& f) const { return apply(f); }
    StepFunction apply_adjoint(const StepFunction& g) const;

    Eigen::VectorXd apply_values(const Eigen::VectorXd& v) const { return node_->apply(v); }
    Eigen::VectorXd adjoint_values(const Eigen::VectorXd& v) const { return node_->adjoint(v); }

    LinearOperator adjoint() const;
    LinearOperator with_descriptor(nlohmann::json d) const;

private:
    struct Node {
        TreeParams params;
        VectorAction apply;
        VectorAction adjoint;
        nlohmann::json descriptor;
    };
    std::shared_ptr<const Node> node_;
};

LinearOperator identity(const TreeParams& params);
LinearOperator zero_operator(const TreeParams& params);

/// S o T.
LinearOperator compose(const LinearOperator& S, const LinearOperator& T);
/// Composition of a chain, applied right to left.
LinearOperator compose(const std::vector<LinearOperator>& chain);
LinearOperator add(const LinearOperator& S, const LinearOperator& T);
LinearOperator subtract(const LinearOperator& S, const LinearOperator& T);
LinearOperator scale(double c, const LinearOperator& T);
/// [S, T] = ST - TS.
LinearOperator bracket(const LinearOperator& S, const LinearOperator& T);

/// Pointwise multiplication by b.
LinearOperator multiplication(const StepFunction& b);

}  // namespace dyadic
