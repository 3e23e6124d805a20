#pragma once

// Morton-ordered kernels shared by the transforms and the operators.
//
// Pyramid layout: one value per cube, generation g at level_offset(g) + morton code.
// Coefficient layout: slot 0 is the root average, (g, z, e) lives at 2^{gn} + z(2^n-1) + e.

#include <Eigen/Core>
#include <cstddef>
#include <vector>

#include "dyadic/tree.hpp"

namespace dyadic::detail {

inline std::size_t slot(const TreeParams& p, int g, std::size_t z, unsigned e) {
    return (std::size_t{1} << (g * p.n())) + z * p.ones() + e;
}

Eigen::VectorXd to_morton(const TreeParams& p, const Eigen::VectorXd& row_major);
Eigen::VectorXd from_morton(const TreeParams& p, const Eigen::VectorXd& morton);

/// Averages of every cube. vm: Morton cell values; pyr: pyramid_size() entries.
void averages(const TreeParams& p, const double* vm, double* pyr);

/// Haar coefficients from the averages pyramid.
void coefficients_from_pyramid(const TreeParams& p, const double* pyr, double* coeffs);

/// Fills the whole averages pyramid from coefficients; the finest level holds the cell values.
void pyramid_from_coefficients(const TreeParams& p, const double* coeffs, double* pyr);

/// Analysis and synthesis in Morton order.
void analyze(const TreeParams& p, const double* vm, double* coeffs);
void synthesize(const TreeParams& p, const double* coeffs, double* vm);

/// vm[cell] += sum of s over the cubes containing the cell.
void push_down_add(const TreeParams& p, const double* s, double* vm);

/// Running sums from the root down: s_Q becomes the sum of s_R over R containing Q (in place).
void accumulate_down(const TreeParams& p, double* s);

/// Subtree sums of a pyramid of per-cube scalars (in place).
void subtree_sums(const TreeParams& p, double* s);

/// Sign table: sign[e * 2^n + c] is the sign of h^e on child c.
const std::vector<double>& sign_table(int n);

/// Convenience wrappers working on row-major values.
Eigen::VectorXd analyze_values(const TreeParams& p, const Eigen::VectorXd& row_major);
Eigen::VectorXd synthesize_values(const TreeParams& p, const Eigen::VectorXd& coeffs);
Eigen::VectorXd pyramid_of_values(const TreeParams& p, const Eigen::VectorXd& row_major);

}  // namespace dyadic::detail
