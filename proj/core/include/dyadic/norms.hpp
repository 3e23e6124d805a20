#pragma once

#include <cmath>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "dyadic/materialize.hpp"
#include "dyadic/operator.hpp"
#include "dyadic/weights.hpp"

namespace dyadic {

/// Operator norm estimate with the input that attains it.
struct NormResult {
    double value = 0.0;
    /// exact_l2 (dense SVD), iterative_l2 (Lanczos bidiagonalization) or ascent_lower.
    std::string method;
    std::optional<StepFunction> certificate;
    int iterations = 0;
    std::uint64_t seed = 0;

    nlohmann::json to_json() const;
};

struct L2Options {
    std::size_t cap = materialization_cap();
    bool want_certificate = true;
    /// Relative tolerance of the iterative method.
    double tol = 1e-8;
    int max_iterations = 10000;
    /// Krylov dimension before a restart.
    int krylov = 200;
    std::uint64_t seed = 0;
    /// Use the iterative method even below the cap.
    bool force_iterative = false;
};

/// ||T||_{L^2(mu) -> L^2(lambda)}: largest singular value of D_lambda^{1/2} M D_mu^{-1/2}.
NormResult opnorm_l2(const LinearOperator& T, const Weight& mu, const Weight& lambda, const L2Options& opt = {});

/// Best ratio ||Tf||_{L^p(lambda)} / ||f||_{L^p(mu)} found by seeded nonlinear power ascent.
///
/// budget counts forward applications of T; the sequence of trial inputs does not depend on
/// budget, so a larger budget never lowers the result.
NormResult opnorm_lp_lower(const LinearOperator& T, const Weight& mu, const Weight& lambda, double p,
                           int budget, std::uint64_t seed);

struct AdjointReport {
    /// Largest |<Tf,g> - <f,T_adj g>| relative to ||f|| ||g|| ||T_adj g||-scale, over random pairs.
    double pairing_residual = 0.0;
    double norm_forward = std::nan("");
    double norm_adjoint = std::nan("");
    double norm_relative_gap = std::nan("");
    bool passed = false;

    nlohmann::json to_json() const;
};

/// Checks <Tf, g> = <f, T_adj g> on random pairs; at p = 2 also compares
/// ||T||_{L^2(mu)->L^2(lambda)} with ||T_adj||_{L^2(lambda')->L^2(mu')}.
AdjointReport adjoint_check(const LinearOperator& T, const LinearOperator& T_adj, const Weight& mu,
                            const Weight& lambda, double p, std::uint64_t seed = 0, int trials = 20,
                            double tol = 1e-8);

// Sublinear operators of the weighted theory.

/// ||S_D||_{L^2(w)}, exact: S_D is an isometry onto sum <w>_Q |f(Q,e)|^2.
NormResult square_function_norm_l2(const Weight& w, const L2Options& opt = {});

/// Lower bound for ||S~^{i,j}||_{L^2(w)} by alternating sign selection and top singular vectors.
NormResult shifted_square_function_norm_l2(const Weight& w, int i, int j, int budget, std::uint64_t seed,
                                           ShiftedReading reading = ShiftedReading::per_signature);

/// Lower bound for ||M||_{L^p(w)} by ascent over linearizations of the maximal function.
NormResult maximal_norm_lower(const Weight& w, double p, int budget, std::uint64_t seed);

/// Upper bound for ||M||_{L^2(w)} from (Mf)^2 <= sum_Q <|f|>_Q^2 1_Q (dense, small trees).
NormResult maximal_norm_upper_l2(const Weight& w, std::size_t cap = materialization_cap());

}  // namespace dyadic
