#pragma once

#include <cstdint>

#include "dyadic/operator.hpp"

namespace dyadic {

/// Pi_b f = sum b(Q,e) <f>_Q h_Q^e.
LinearOperator pi(const StepFunction& b);

/// Pi*_b f = sum b(Q,e) f(Q,e) 1_Q/|Q|.
LinearOperator pi_star(const StepFunction& b);

/// Gamma_b f = sum_{e != h} b(Q,e) f(Q,h) |Q|^{-1/2} h_Q^{e+h}; zero when n = 1.
LinearOperator gamma(const StepFunction& b);

/// Pi_b + Pi*_b + Gamma_b.
LinearOperator frak_p(const StepFunction& b);

/// f -> Pi_f b = sum f(Q,e) <b>_Q h_Q^e, the Haar multiplier by the averages of b.
LinearOperator averaging_multiplier(const StepFunction& b);

/// Lambda_{a,b} f = sum a(Q,e) [sum_{R contains Q} b(R,h) f(R,h)/|R|] h_Q^e, R = Q included.
LinearOperator lambda(const StepFunction& a, const StepFunction& b);

/// The R = Q part of lambda(a, b).
LinearOperator lambda_tilde(const StepFunction& a, const StepFunction& b);

/// Multipliers sigma(Q,e) with |sigma| <= 1, stored in the flat coefficient layout.
class MartingaleSigns {
public:
    MartingaleSigns(const TreeParams& params, Eigen::VectorXd flat);

    static MartingaleSigns constant(const TreeParams& params, double s);
    /// Independent random signs +-1.
    static MartingaleSigns random(const TreeParams& params, std::uint64_t seed);

    const TreeParams& params() const { return params_; }
    const Eigen::VectorXd& flat() const { return flat_; }
    double max_abs() const;

private:
    TreeParams params_;
    Eigen::VectorXd flat_;
};

/// T_sigma f = sum sigma(Q,e) f(Q,e) h_Q^e; the root average is dropped.
LinearOperator martingale(const MartingaleSigns& sigma);

/// U_(j) f = sum (<b>_Q - <b>_{Q^(j)}) f(Q,h) h_Q^h; zero where Q^(j) is missing.
LinearOperator u_operator(const StepFunction& b, int j);

}  // namespace dyadic
