#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dyadic/norms.hpp"

namespace dyadic {

/// One measured norm with its reference quantity. Unused fields are NaN.
struct StudyRow {
    double k = std::nan("");
    double i = std::nan("");
    double j = std::nan("");
    double p = 2.0;
    double alpha = std::nan("");
    std::uint64_t seed = 0;
    double ap_mu = std::nan("");
    double ap_lambda = std::nan("");
    double ap_nu = std::nan("");
    double ap_w = std::nan("");
    double bmo_b = std::nan("");
    double bmo_nu_b = std::nan("");
    double norm = std::nan("");
    double reference = std::nan("");
    double ratio = std::nan("");
    std::string op;
    std::string method;
    /// Trial index of random studies, -1 otherwise.
    int trial = -1;

    nlohmann::json to_json() const;
};

struct StudyTable {
    nlohmann::json metadata;
    std::vector<StudyRow> rows;

    /// Header plus one line per row; NaN fields are left empty.
    void write_csv(std::ostream& os) const;
    /// {"metadata": .., "rows": [..]}; NaN fields become null.
    nlohmann::json to_json() const;
    /// Rows whose op equals the given name (and k, when k >= 0).
    std::vector<StudyRow> select(const std::string& op, int k = -1) const;
};

/// Column names of the CSV output, in order.
const std::vector<std::string>& study_columns();

/// Least-squares slope of log y against log x.
///
/// Throws InvalidArgument with fewer than three rows, non-positive entries, or when all x lie
/// within 1% of each other.
double fit_exponent(const std::vector<StudyRow>& rows, const std::function<double(const StudyRow&)>& x,
                    const std::function<double(const StudyRow&)>& y);

struct OneWeightOptions {
    std::vector<int> k_list{1, 2, 3};
    int i = 1;
    int j = 2;
    std::vector<double> alphas{0.0, 0.3, -0.3, 0.6, -0.6, 0.8, -0.8, 0.9, -0.9};
    int n = 1;
    int J = 10;
    std::uint64_t seed = 0;
    /// Also emit the shift, martingale, paraproduct, Theta and Lambda rows.
    bool baselines = true;
    int jobs = 1;
    L2Options l2{};
};

/// Power-weight sweep: ||C_b^k(S^{ij})||_{L^2(w)} against ||b||^k [w]^{k+1}, b the log symbol.
///
/// Baseline ops: shift, martingale, pi, pi_star, gamma (n >= 2) against [w]; theta (Theta_b(S)),
/// lambda, lambda_tilde, theta_pi, theta_pi_star (a = b) against ||b||^2 [w]^2.
StudyTable one_weight_scaling(const OneWeightOptions& opt);

struct TwoWeightOptions {
    std::vector<int> k_list{1, 2, 3, 4};
    /// Largest M + k for the Theta_b^M(C_b^k) rows.
    int max_order = 4;
    int i = 1;
    int j = 2;
    double p = 2.0;
    int trials = 50;
    std::uint64_t seed = 0;
    int n = 1;
    int J = 8;
    /// Row classes: commutator (Theta^M C^k), theta (Theta^k S), paraproduct, lambda (Theta^k of Pi_a, Pi*_a, Lambda).
    std::vector<std::string> classes{"commutator", "theta", "paraproduct", "lambda"};
    /// Ascent budget for p != 2.
    int budget = 60;
    int jobs = 1;
    L2Options l2{};
};

/// Random (mu, lambda) pairs from the power and cascade families, b random with
/// ||b||_{BMO^2_D(nu)} = 1. References follow the two-weight bounds:
/// Theta^M C^k: ||b||^{M+k-1} ||b||_nu; Theta^k(S): ||b||^{k-1} ||b||_nu; paraproducts: ||b||_nu;
/// Theta^k(P_a): ||a|| ||b||^{k-1} ||b||_nu; Theta^k(Lambda): ||a|| ||b||^k ||b||_nu.
StudyTable two_weight_study(const TwoWeightOptions& opt);

/// Same pair of weights as row `trial` of two_weight_study uses.
std::pair<Weight, Weight> two_weight_pair(const TreeParams& params, std::uint64_t seed, int trial);

struct DualityOptions {
    int trials = 200;
    std::uint64_t seed = 0;
    int n = 1;
    int J = 8;
    int jobs = 1;
};

/// |<b,Phi>| / ([nu]_{A_2} ||b||_{BMO^2_D(nu)} ||S_D Phi||_{L^1(nu)}) over random nu, b, Phi.
/// Odd trials take b = Phi, even trials independent b and Phi.
StudyTable duality_study(const DualityOptions& opt);

/// Fitted exponent of one op (and k) of a one-weight table against [w]_{A_2}.
struct SlopeCheck {
    std::string op;
    int k = -1;
    double slope = std::nan("");
    /// Exponent bound plus 0.25: k+1 for commutators, 1 for linear baselines, 2 for Theta and Lambda.
    double limit = std::nan("");
    bool passed = false;
};

/// Slopes of every op group in a one_weight_scaling table.
std::vector<SlopeCheck> scaling_slopes(const StudyTable& table);

/// Largest ratio in the table (NaN rows skipped).
double max_ratio(const std::vector<StudyRow>& rows);

}  // namespace dyadic
