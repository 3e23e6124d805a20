#include "dyadic/materialize.hpp"

#include <cstdlib>
#include <string>

#include "dyadic/errors.hpp"

namespace dyadic {

std::size_t materialization_cap() {
    if (const char* env = std::getenv("DYADIC_CZO_CAP")) {
        try {
            const long long v = std::stoll(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
        throw InvalidArgument(std::string("DYADIC_CZO_CAP must be a positive integer, got ") + env);
    }
    return 4096;
}

namespace {

template <class Act>
Eigen::MatrixXd fill(const TreeParams& p, std::size_t cap, Act act) {
    const std::size_t N = p.cells();
    if (N > cap)
        throw CapExceeded("materialization of " + std::to_string(N) + " cells exceeds cap " + std::to_string(cap));
    const auto n = static_cast<Eigen::Index>(N);
    Eigen::MatrixXd M(n, n);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        e[k] = 1.0;
        M.col(k) = act(e);
        e[k] = 0.0;
    }
    return M;
}

}  // namespace

Eigen::MatrixXd materialize(const LinearOperator& T, std::size_t cap) {
    return fill(T.params(), cap, [&](const Eigen::VectorXd& v) { return T.apply_values(v); });
}

Eigen::MatrixXd materialize_adjoint(const LinearOperator& T, std::size_t cap) {
    return fill(T.params(), cap, [&](const Eigen::VectorXd& v) { return T.adjoint_values(v); });
}

}  // namespace dyadic
