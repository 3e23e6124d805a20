#pragma once

#include "dyadic/operator.hpp"

namespace dyadic {

/// Theta_b(T) f = Pi_{Tf} b - T Pi_f b.
LinearOperator theta(const StepFunction& b, const LinearOperator& T);

/// k-fold Theta_b; k = 0 returns T.
LinearOperator theta_iter(const StepFunction& b, const LinearOperator& T, int k);

/// [b, T] f = b Tf - T(bf).
LinearOperator commutator(const StepFunction& b, const LinearOperator& T);

/// C_b^k(T) = [b, C_b^{k-1}(T)], k >= 1.
LinearOperator commutator_iter(const StepFunction& b, const LinearOperator& T, int k);

}  // namespace dyadic
