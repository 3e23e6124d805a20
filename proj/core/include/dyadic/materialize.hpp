#pragma once

#include <Eigen/Core>
#include <cstddef>

#include "dyadic/operator.hpp"

namespace dyadic {

/// Cap on 2^{Jn} for dense matrices; DYADIC_CZO_CAP overrides the default 4096.
std::size_t materialization_cap();

/// Matrix M with T(f).values() = M * f.values(); column k is T applied to the indicator of cell k.
Eigen::MatrixXd materialize(const LinearOperator& T, std::size_t cap = materialization_cap());

/// Same for the adjoint action (equals materialize(T).transpose() up to round-off).
Eigen::MatrixXd materialize_adjoint(const LinearOperator& T, std::size_t cap = materialization_cap());

}  // namespace dyadic
