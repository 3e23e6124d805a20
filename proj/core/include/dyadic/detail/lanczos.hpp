#pragma once

#include <Eigen/Core>
#include <functional>

namespace dyadic::detail {

using MatVec = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct TopSingular {
    double sigma = 0.0;
    Eigen::VectorXd right;  ///< unit right singular vector estimate
    int iterations = 0;
    bool converged = false;
};

/// Largest singular value of a matrix-free A (ncols columns) by Golub-Kahan-Lanczos
/// bidiagonalization with full reorthogonalization and restarts.
TopSingular top_singular(const MatVec& A, const MatVec& At, const Eigen::VectorXd& start, double tol,
                         int max_iterations, int krylov);

}  // namespace dyadic::detail
