#pragma once

#include <Eigen/Core>

#include "dyadic/tree.hpp"

namespace dyadic {

/// Real function constant on each of the 2^{Jn} finest cells.
///
/// Values are stored in row-major order of the cell index vector (m_0 slowest).
class StepFunction {
public:
    explicit StepFunction(const TreeParams& params);
    StepFunction(const TreeParams& params, Eigen::VectorXd values);

    static StepFunction constant(const TreeParams& params, double c);
    static StepFunction indicator(const TreeParams& params, const DyadicCube& Q);

    const TreeParams& params() const { return params_; }
    const Eigen::VectorXd& values() const { return values_; }
    std::size_t size() const { return static_cast<std::size_t>(values_.size()); }

    double operator[](std::size_t cell) const { return values_[static_cast<Eigen::Index>(cell)]; }
    /// Value on the finest cell with index vector m.
    double at(const std::vector<std::uint32_t>& m) const;

    /// Integral over [0,1)^n.
    double integral() const;
    double l2_norm() const;

    StepFunction operator+(const StepFunction& o) const;
    StepFunction operator-(const StepFunction& o) const;
    StepFunction operator-() const;
    StepFunction operator*(double c) const;
    friend StepFunction operator*(double c, const StepFunction& f) { return f * c; }

private:
    TreeParams params_;
    Eigen::VectorXd values_;
};

/// Pointwise product.
StepFunction multiply(const StepFunction& f, const StepFunction& g);

/// L^2([0,1)^n) inner product.
double inner_product(const StepFunction& f, const StepFunction& g);

/// Cellwise power f^s of a strictly positive function.
StepFunction pow(const StepFunction& f, double s);

}  // namespace dyadic
