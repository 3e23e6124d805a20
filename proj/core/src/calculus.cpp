#include "dyadic/calculus.hpp"

#include "dyadic/errors.hpp"
#include "dyadic/paraproducts.hpp"

namespace dyadic {

using nlohmann::json;
using Vec = Eigen::VectorXd;

LinearOperator theta(const StepFunction& b, const LinearOperator& T) {
    require_same(b.params(), T.params(), "theta");
    // Pi_{Tf} b = D(Tf) with D the averaging multiplier of b, which is self-adjoint.
    const LinearOperator D = averaging_multiplier(b);
    return LinearOperator(
        T.params(),
        [D, T](const Vec& f) { return (D.apply_values(T.apply_values(f)) - T.apply_values(D.apply_values(f))).eval(); },
        [D, T](const Vec& g) {
            return (T.adjoint_values(D.apply_values(g)) - D.apply_values(T.adjoint_values(g))).eval();
        },
        json{{"theta", {{"k", 1}, {"of", T.descriptor()}}}});
}

LinearOperator theta_iter(const StepFunction& b, const LinearOperator& T, int k) {
    if (k < 0) throw InvalidArgument("theta_iter needs k >= 0");
    LinearOperator out = T;
    for (int m = 0; m < k; ++m) out = theta(b, out);
    if (k > 1) out = out.with_descriptor(json{{"theta", {{"k", k}, {"of", T.descriptor()}}}});
    return out;
}

LinearOperator commutator(const StepFunction& b, const LinearOperator& T) {
    require_same(b.params(), T.params(), "commutator");
    const Vec w = b.values();
    // [b,T]* = T* M_b - M_b T*
    return LinearOperator(
        T.params(),
        [w, T](const Vec& f) { return (w.cwiseProduct(T.apply_values(f)) - T.apply_values(w.cwiseProduct(f))).eval(); },
        [w, T](const Vec& g) {
            return (T.adjoint_values(w.cwiseProduct(g)) - w.cwiseProduct(T.adjoint_values(g))).eval();
        },
        json{{"commutator", {{"k", 1}, {"of", T.descriptor()}}}});
}

LinearOperator commutator_iter(const StepFunction& b, const LinearOperator& T, int k) {
    if (k < 1) throw InvalidArgument("commutator_iter needs k >= 1");
    LinearOperator out = T;
    for (int m = 0; m < k; ++m) out = commutator(b, out);
    if (k > 1) out = out.with_descriptor(json{{"commutator", {{"k", k}, {"of", T.descriptor()}}}});
    return out;
}

}  // namespace dyadic
