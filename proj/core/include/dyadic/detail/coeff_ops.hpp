#pragma once

#include <Eigen/Core>

#include "dyadic/detail/kernels.hpp"
#include "dyadic/step_function.hpp"

namespace dyadic::detail {

/// Haar coefficients and averages pyramid of one input.
struct Analysis {
    Eigen::VectorXd coeffs;
    Eigen::VectorXd pyr;
};

Analysis analyze_full(const TreeParams& p, const Eigen::VectorXd& row_major);

/// Row-major values of sum coeffs + sum_Q ind_Q 1_Q; ind may be empty.
Eigen::VectorXd synthesize_with_indicators(const TreeParams& p, const Eigen::VectorXd& coeffs,
                                           const Eigen::VectorXd& ind);

/// Precomputed data of a symbol b.
struct Symbol {
    Eigen::VectorXd coeffs;
    Eigen::VectorXd pyr;
    static Symbol of(const StepFunction& b);
};

}  // namespace dyadic::detail
