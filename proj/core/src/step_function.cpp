#include "dyadic/step_function.hpp"

#include <cmath>

#include "dyadic/errors.hpp"

namespace dyadic {

StepFunction::StepFunction(const TreeParams& params)
    : params_(params), values_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(params.cells()))) {}

StepFunction::StepFunction(const TreeParams& params, Eigen::VectorXd values)
    : params_(params), values_(std::move(values)) {
    if (static_cast<std::size_t>(values_.size()) != params_.cells())
        throw InvalidArgument("step function needs exactly 2^{Jn} values");
}

StepFunction StepFunction::constant(const TreeParams& params, double c) {
    return StepFunction(params, Eigen::VectorXd::Constant(static_cast<Eigen::Index>(params.cells()), c));
}

StepFunction StepFunction::indicator(const TreeParams& params, const DyadicCube& Q) {
    validate_cube(params, Q);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(params.cells()));
    const auto& m2c = params.morton_to_cell();
    const int shift = (params.J() - Q.g) * params.n();
    const std::uint64_t z = morton_code(Q);
    for (std::uint64_t k = z << shift; k < (z + 1) << shift; ++k) v[m2c[k]] = 1.0;
    return StepFunction(params, std::move(v));
}

double StepFunction::at(const std::vector<std::uint32_t>& m) const {
    if (static_cast<int>(m.size()) != params_.n()) throw InvalidArgument("index vector has wrong dimension");
    std::size_t cell = 0;
    for (auto v : m) {
        if (v >= (std::uint32_t{1} << params_.J())) throw InvalidArgument("cell index out of range");
        cell = (cell << params_.J()) | v;
    }
    return values_[static_cast<Eigen::Index>(cell)];
}

double StepFunction::integral() const { return values_.sum() * params_.cell_volume(); }

double StepFunction::l2_norm() const { return std::sqrt(values_.squaredNorm() * params_.cell_volume()); }

StepFunction StepFunction::operator+(const StepFunction& o) const {
    require_same(params_, o.params_, "add");
    return StepFunction(params_, values_ + o.values_);
}

StepFunction StepFunction::operator-(const StepFunction& o) const {
    require_same(params_, o.params_, "subtract");
    return StepFunction(params_, values_ - o.values_);
}

StepFunction StepFunction::operator-() const { return StepFunction(params_, -values_); }

StepFunction StepFunction::operator*(double c) const { return StepFunction(params_, values_ * c); }

StepFunction multiply(const StepFunction& f, const StepFunction& g) {
    require_same(f.params(), g.params(), "multiply");
    return StepFunction(f.params(), f.values().cwiseProduct(g.values()));
}

double inner_product(const StepFunction& f, const StepFunction& g) {
    require_same(f.params(), g.params(), "inner_product");
    return f.values().dot(g.values()) * f.params().cell_volume();
}

StepFunction pow(const StepFunction& f, double s) {
    Eigen::VectorXd v(f.values().size());
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        if (f.values()[k] <= 0.0) throw InvalidArgument("power of a non-positive value");
        v[k] = std::pow(f.values()[k], s);
    }
    return StepFunction(f.params(), std::move(v));
}

}  // namespace dyadic
