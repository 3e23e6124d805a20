#pragma once

#include "dyadic/step_function.hpp"

namespace dyadic {

/// Strictly positive step function used as a density.
class Weight {
public:
    explicit Weight(StepFunction w);

    static Weight unit(const TreeParams& params) { return Weight(StepFunction::constant(params, 1.0)); }

    const StepFunction& function() const { return w_; }
    const TreeParams& params() const { return w_.params(); }
    const Eigen::VectorXd& values() const { return w_.values(); }

    /// w(Q), the integral of w over Q.
    double mass(const DyadicCube& Q) const;
    double total() const { return w_.integral(); }

private:
    StepFunction w_;
};

/// [w]_{A_p}: maximum over tree cubes of <w>_Q <w^{1-q}>_Q^{p-1}.
double ap_characteristic(const Weight& w, double p);

/// w' = w^{1-q}, the weight of the dual space of L^p(w).
Weight conjugate_weight(const Weight& w, double p);

/// nu = mu^{1/p} lambda^{-1/p}.
Weight bloom_weight(const Weight& mu, const Weight& lambda, double p);

/// Weights mu, lambda and exponent p, with the derived conjugates and Bloom weight.
struct WeightPair {
    Weight mu;
    Weight lambda;
    double p;

    WeightPair(Weight mu_, Weight lambda_, double p_);
    double q() const { return p / (p - 1.0); }
    Weight nu() const { return bloom_weight(mu, lambda, p); }
    Weight mu_conjugate() const { return conjugate_weight(mu, p); }
    Weight lambda_conjugate() const { return conjugate_weight(lambda, p); }
};

/// (integral |f|^p w)^{1/p}.
double weighted_lp_norm(const StepFunction& f, const Weight& w, double p);

/// sup_Q w(Q)^{-1} integral_Q |b - <b>_Q| dx.
double bmo_norm(const StepFunction& b, const Weight& w);

/// (sup_Q w(Q)^{-1} integral_Q |b - <b>_Q|^q w^{1-q} dx)^{1/q}.
double bmo_q_norm(const StepFunction& b, const Weight& w, double q);

/// Unweighted dyadic BMO^2 norm, (sup_Q |Q|^{-1} sum_{P in Q} |b(P,e)|^2)^{1/2}.
double bmo2_norm(const StepFunction& b);

/// Weighted dyadic BMO^2 norm, bmo_q_norm with q = 2.
double bmo2_norm(const StepFunction& b, const Weight& w);

/// Dyadic maximal function: max over cubes containing the cell of <|f|>_Q.
StepFunction dyadic_maximal(const StepFunction& f);

/// (sum_{Q,e} |f(Q,e)|^2 1_Q/|Q|)^{1/2}.
StepFunction square_function(const StepFunction& f);

enum class ShiftedReading {
    per_signature,  ///< sum over e of (sum_P |f(P,e)|)^2
    joint,          ///< (sum_P sum_e |f(P,e)|)^2
};

/// Shifted square function with inner sums over the i-th descendants of the j-th ancestor.
///
/// Q ranges over generations j..J-1 for which those descendants still carry coefficients.
StepFunction shifted_square_function(const StepFunction& f, int i, int j,
                                     ShiftedReading reading = ShiftedReading::per_signature);

}  // namespace dyadic
