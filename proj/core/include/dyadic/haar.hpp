#pragma once

#include <Eigen/Core>
#include <vector>

#include "dyadic/step_function.hpp"
#include "dyadic/tree.hpp"

namespace dyadic {

/// Root average plus the cancellative Haar coefficients of a step function.
///
/// Coefficients are stored flat, ordered by generation, then Morton code of the cube,
/// then signature, so iteration order is fixed for a given tree.
class HaarExpansion {
public:
    struct Entry {
        DyadicCube cube;
        Signature signature;
        double value;
    };

    explicit HaarExpansion(const TreeParams& params);
    HaarExpansion(const TreeParams& params, Eigen::VectorXd flat);

    const TreeParams& params() const { return params_; }
    double root_average() const { return flat_[0]; }
    double coeff(const DyadicCube& Q, Signature e) const;
    const Eigen::VectorXd& flat() const { return flat_; }

    HaarExpansion with_root_average(double v) const;
    HaarExpansion with_coeff(const DyadicCube& Q, Signature e, double v) const;

    /// Sum of squared cancellative coefficients.
    double coeff_sum_squares() const;
    std::vector<Entry> entries() const;

    /// Flat index of (Q, e).
    std::size_t slot(const DyadicCube& Q, Signature e) const;

private:
    TreeParams params_;
    Eigen::VectorXd flat_;
};

HaarExpansion analyze(const StepFunction& f);
StepFunction synthesize(const HaarExpansion& e);

/// L^2-normalized h_Q^e; the all-ones signature gives |Q|^{-1/2} 1_Q.
StepFunction haar_function(const TreeParams& params, const DyadicCube& Q, Signature e);

/// Mean of f over Q.
double average(const StepFunction& f, const DyadicCube& Q);

/// Means of f over every cube, one generation after another, Morton order within a generation.
Eigen::VectorXd average_pyramid(const StepFunction& f);
double pyramid_at(const TreeParams& params, const Eigen::VectorXd& pyr, const DyadicCube& Q);

}  // namespace dyadic
