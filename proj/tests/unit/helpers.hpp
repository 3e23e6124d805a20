#pragma once

#include <cmath>
#include <random>

#include "dyadic/families.hpp"
#include "dyadic/operator.hpp"
#include "dyadic/step_function.hpp"

namespace dyadic::testing {

inline StepFunction random_function(const TreeParams& p, std::uint64_t seed) { return random_step_function(p, seed); }

inline double max_abs_diff(const StepFunction& a, const StepFunction& b) {
    return (a.values() - b.values()).cwiseAbs().maxCoeff();
}

/// ||a - b|| / max(||a||, ||b||, scale).
inline double rel_diff(const StepFunction& a, const StepFunction& b, double scale = 1e-300) {
    const double d = (a.values() - b.values()).norm();
    return d / std::max({a.values().norm(), b.values().norm(), scale});
}

/// Largest relative residual of S f against T f over a few random inputs.
inline double operator_gap(const LinearOperator& S, const LinearOperator& T, std::uint64_t seed, int trials = 5) {
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const StepFunction f = random_function(S.params(), seed + t);
        worst = std::max(worst, rel_diff(S(f), T(f), f.values().norm()));
    }
    return worst;
}

/// Indicator vector of a cube, built from cell coordinates (independent of the library's cube tables).
inline StepFunction cube_indicator(const TreeParams& p, const DyadicCube& Q) {
    StepFunction out(p);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p.cells()));
    const int shift = p.J() - Q.g;
    for (std::size_t c = 0; c < p.cells(); ++c) {
        // Row-major: coordinate 0 is the slowest index.
        std::size_t rest = c;
        bool inside = true;
        for (int d = p.n() - 1; d >= 0; --d) {
            const std::size_t m = rest & ((std::size_t{1} << p.J()) - 1);
            rest >>= p.J();
            inside = inside && (m >> shift) == Q.m[d];
        }
        if (inside) v[static_cast<Eigen::Index>(c)] = 1.0;
    }
    return StepFunction(p, v);
}

}  // namespace dyadic::testing
