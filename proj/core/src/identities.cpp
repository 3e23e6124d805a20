#include "dyadic/identities.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "dyadic/calculus.hpp"
#include "dyadic/detail/random.hpp"
#include "dyadic/families.hpp"
#include "dyadic/haar.hpp"
#include "dyadic/io.hpp"
#include "dyadic/materialize.hpp"
#include "dyadic/paraproducts.hpp"
#include "dyadic/shift.hpp"
#include "dyadic/weights.hpp"

namespace dyadic {

using nlohmann::json;
using Vec = Eigen::VectorXd;

namespace {

/// Inputs of one check: the tree and a seed private to (n, J, trial, identity).
struct Ctx {
    TreeParams p;
    std::uint64_t seed;
    int trial;

    std::uint64_t sub(std::uint64_t stream) const { return detail::mix_seed(seed, stream); }
    StepFunction f(std::uint64_t s) const { return random_step_function(p, sub(s)); }
    /// Random symbol with a clearly non-zero root average.
    StepFunction symbol(std::uint64_t s) const {
        if (trial % 3 == 2 && s == 0) return log_symbol(p);
        return random_step_function(p, sub(s)) + StepFunction::constant(p, 0.5 + 0.25 * (trial % 4));
    }
    StepFunction mean_zero(std::uint64_t s) const {
        const StepFunction g = random_step_function(p, sub(s));
        return g - StepFunction::constant(p, g.integral());
    }
    int pick(std::uint64_t s, int lo, int hi) const {
        std::mt19937_64 rng(sub(s));
        return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

double rel(const Vec& lhs, const Vec& rhs, double scale) {
    const double d = (lhs - rhs).norm();
    const double s = std::max({scale, lhs.norm(), rhs.norm()});
    return s > 0.0 ? d / s : d;
}

double rel(const StepFunction& lhs, const StepFunction& rhs, const StepFunction& f) {
    return rel(lhs.values(), rhs.values(), f.values().norm());
}

/// Residual of S f = T f on the given input.
double same_on(const LinearOperator& S, const LinearOperator& T, const StepFunction& f) {
    return rel(S(f), T(f), f);
}

/// Residual of S = T on two random inputs plus the adjoint actions on one more.
double same_op(const Ctx& c, const LinearOperator& S, const LinearOperator& T, std::uint64_t s = 100) {
    double r = std::max(same_on(S, T, c.f(s)), same_on(S, T, c.f(s + 1)));
    const StepFunction g = c.f(s + 2);
    return std::max(r, rel(S.apply_adjoint(g), T.apply_adjoint(g), g));
}

double zero_on(const LinearOperator& T, const StepFunction& f) {
    return T(f).values().norm() / f.values().norm();
}

/// The largest matrix size compared entrywise inside the suite.
constexpr std::size_t kDenseLimit = 256;

double max_entry_rel(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    const double s = std::max({A.cwiseAbs().maxCoeff(), B.cwiseAbs().maxCoeff(), 1.0});
    return (A - B).cwiseAbs().maxCoeff() / s;
}

std::vector<DyadicCube> all_cubes(const TreeParams& p, int max_g) {
    std::vector<DyadicCube> out;
    for (int g = 0; g <= max_g; ++g) {
        auto level = cubes_of_generation(p, g);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

/// h_R^e on the cube Q strictly inside R, from the coordinates of the child of R containing Q.
double haar_value(const DyadicCube& R, Signature e, const DyadicCube& Q) {
    const DyadicCube child = *ancestor(Q, Q.g - R.g - 1);
    double s = 1.0;
    for (int i = 0; i < R.dim(); ++i)
        if (!((e.bits >> i) & 1u) && (child.m[i] & 1u)) s = -s;
    return s / std::sqrt(R.volume());
}

std::vector<Signature> cancellative_signatures(int n) {
    std::vector<Signature> out;
    for (unsigned e = 0; e + 1 < (1u << n); ++e) out.push_back(Signature{e, n});
    return out;
}

struct Check {
    std::string name;
    std::string group;
    /// Run only on trial 0 of each (n, J).
    bool once = false;
    int max_J = 99;
    std::function<double(const Ctx&)> run;
};

// ---------------------------------------------------------------- dyadic_core

double roundtrip(const Ctx& c) {
    const StepFunction f = c.f(0);
    return (synthesize(analyze(f)).values() - f.values()).cwiseAbs().maxCoeff() / f.values().cwiseAbs().maxCoeff();
}

double parseval(const Ctx& c) {
    const StepFunction f = c.f(0);
    const HaarExpansion e = analyze(f);
    const double lhs = f.l2_norm() * f.l2_norm();
    return std::abs(lhs - (e.root_average() * e.root_average() + e.coeff_sum_squares())) / lhs;
}

double orthonormality(const Ctx& c) {
    const TreeParams& p = c.p;
    std::vector<Vec> hs;
    for (const auto& Q : all_cubes(p, p.J() - 1))
        for (Signature e : cancellative_signatures(p.n())) hs.push_back(haar_function(p, Q, e).values());
    hs.push_back(Vec::Ones(static_cast<Eigen::Index>(p.cells())));  // h^1 of the root
    Eigen::MatrixXd H(static_cast<Eigen::Index>(p.cells()), static_cast<Eigen::Index>(hs.size()));
    for (std::size_t k = 0; k < hs.size(); ++k) H.col(static_cast<Eigen::Index>(k)) = hs[k];
    const Eigen::MatrixXd G = H.transpose() * H * p.cell_volume();
    return (G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
}

double telescoping(const Ctx& c) {
    const StepFunction f = c.f(0);
    const HaarExpansion e = analyze(f);
    double worst = 0.0;
    for (const auto& Q : all_cubes(c.p, c.p.J())) {
        double sum = e.root_average();
        for (int k = 1; k <= Q.g; ++k) {
            const DyadicCube R = *ancestor(Q, k);
            for (Signature s : cancellative_signatures(c.p.n())) sum += e.coeff(R, s) * haar_value(R, s, Q);
        }
        worst = std::max(worst, std::abs(sum - average(f, Q)));
    }
    return worst / f.values().cwiseAbs().maxCoeff();
}

double product_rule(const Ctx& c) {
    const TreeParams& p = c.p;
    double worst = 0.0;
    for (const auto& Q : all_cubes(p, p.J() - 1))
        for (Signature e : cancellative_signatures(p.n()))
            for (Signature h : cancellative_signatures(p.n())) {
                const StepFunction lhs = multiply(haar_function(p, Q, e), haar_function(p, Q, h));
                const StepFunction rhs = haar_function(p, Q, signature_add(e, h)) * (1.0 / std::sqrt(Q.volume()));
                worst = std::max(worst, rel(lhs, rhs, rhs));
            }
    return worst;
}

double partition_nesting(const Ctx& c) {
    const TreeParams& p = c.p;
    double violations = 0.0;
    for (int g = 0; g <= p.J(); ++g) {
        Vec cover = Vec::Zero(static_cast<Eigen::Index>(p.cells()));
        for (const auto& Q : cubes_of_generation(p, g)) cover += StepFunction::indicator(p, Q).values();
        violations += static_cast<double>((cover.array() != 1.0).count());
    }
    const auto cubes = all_cubes(p, p.J());
    for (const auto& P : cubes)
        for (const auto& Q : cubes) {
            bool disjoint = false;
            for (int i = 0; i < p.n() && !disjoint; ++i)
                disjoint = P.upper(i) <= Q.lower(i) || Q.upper(i) <= P.lower(i);
            if (!(disjoint || P.contains(Q) || Q.contains(P))) violations += 1.0;
        }
    for (const auto& Q : cubes)
        for (int k = 0; Q.g + k <= p.J() && k <= 2; ++k) {
            Vec cover = Vec::Zero(static_cast<Eigen::Index>(p.cells()));
            for (const auto& D : descendants(p, Q, k)) {
                cover += StepFunction::indicator(p, D).values();
                if (*ancestor(D, k) != Q) violations += 1.0;
            }
            violations += (cover - StepFunction::indicator(p, Q).values()).cwiseAbs().sum();
        }
    return violations;
}

// ------------------------------------------------------------ weighted_spaces

Weight test_weight(const Ctx& c, std::uint64_t s) {
    if (c.trial % 2 == 0) return random_weight(c.p, c.sub(s), 1.5);
    std::mt19937_64 rng(c.sub(s + 1));
    return cascade_weight(c.p, 0.1 + 0.3 * detail::uniform01(rng), c.sub(s));
}

double ap_bounds(const Ctx& c) {
    double bad = 0.0;
    const Weight w = test_weight(c, 0);
    const Weight one = Weight(StepFunction::constant(c.p, 2.5));
    for (double p : {1.5, 2.0, 3.0}) {
        if (!(ap_characteristic(w, p) > 1.0 + 1e-12)) bad += 1.0;
        bad += std::abs(ap_characteristic(one, p) - 1.0) > 1e-12 ? 1.0 : 0.0;
    }
    return bad;
}

double conjugate_ap(const Ctx& c) {
    const Weight w = test_weight(c, 0);
    double worst = 0.0;
    for (double p : {1.5, 2.0, 3.0}) {
        const double q = p / (p - 1.0);
        const double lhs = ap_characteristic(conjugate_weight(w, p), q);
        const double rhs = std::pow(ap_characteristic(w, p), q - 1.0);
        worst = std::max(worst, std::abs(lhs - rhs) / rhs);
    }
    return worst;
}

double bloom_swap(const Ctx& c) {
    const Weight mu = test_weight(c, 0), lambda = test_weight(c, 7);
    double worst = 0.0;
    for (double p : {1.5, 2.0, 3.0}) {
        const Weight nu = bloom_weight(mu, lambda, p);
        const Weight swapped = bloom_weight(lambda, mu, p);
        worst = std::max(worst, (nu.values().cwiseProduct(swapped.values()).array() - 1.0).abs().maxCoeff());
        const double a = ap_characteristic(nu, 2.0), b = ap_characteristic(swapped, 2.0);
        worst = std::max(worst, std::abs(a - b) / a);
    }
    return worst;
}

double weighted_l2_inner(const Ctx& c) {
    const StepFunction f = c.f(0);
    const Weight w = test_weight(c, 1);
    const double lhs = std::pow(weighted_lp_norm(f, w, 2.0), 2.0);
    const double rhs = inner_product(f, multiply(f, w.function()));
    return std::abs(lhs - rhs) / lhs;
}

double square_function_oracle(const Ctx& c) {
    const StepFunction f = c.f(0);
    Vec sq = Vec::Zero(static_cast<Eigen::Index>(c.p.cells()));
    for (const auto& entry : analyze(f).entries())
        sq += StepFunction::indicator(c.p, entry.cube).values() * (entry.value * entry.value / entry.cube.volume());
    const StepFunction S = square_function(f);
    double r = rel(S.values(), sq.cwiseSqrt(), 0.0);
    const double l2 = S.l2_norm() * S.l2_norm();
    return std::max(r, std::abs(l2 - analyze(f).coeff_sum_squares()) / l2);
}

double shifted_square_oracle(const Ctx& c) {
    const TreeParams& p = c.p;
    const StepFunction f = c.f(0);
    const HaarExpansion e = analyze(f);
    const int i = c.pick(1, 0, 2), j = c.pick(2, 0, 2);
    Vec sq = Vec::Zero(static_cast<Eigen::Index>(p.cells()));
    for (const auto& Q : all_cubes(p, p.J() - 1)) {
        const auto R = ancestor(Q, j);
        if (!R || R->g + i > p.J() - 1) continue;
        double t = 0.0;
        for (Signature s : cancellative_signatures(p.n())) {
            double inner = 0.0;
            for (const auto& P : descendants(p, *R, i)) inner += std::abs(e.coeff(P, s));
            t += inner * inner;
        }
        sq += StepFunction::indicator(p, Q).values() * (t / Q.volume());
    }
    return rel(shifted_square_function(f, i, j).values(), sq.cwiseSqrt(), 0.0);
}

double maximal_oracle(const Ctx& c) {
    const TreeParams& p = c.p;
    const StepFunction f = c.f(0);
    const StepFunction absf(p, f.values().cwiseAbs());
    const StepFunction M = dyadic_maximal(f);
    double worst = 0.0;
    for (const auto& cell : cubes_of_generation(p, p.J())) {
        double best = 0.0;
        for (int k = 0; k <= p.J(); ++k) best = std::max(best, average(absf, *ancestor(cell, k)));
        worst = std::max(worst, std::abs(best - M.at(cell.m)));
        if (M.at(cell.m) < std::abs(f.at(cell.m)) - 1e-15) worst = std::max(worst, 1.0);
    }
    return worst;
}

double bmo_two_ways(const Ctx& c) {
    const StepFunction b = c.symbol(0);
    const double a = bmo2_norm(b), q = bmo_q_norm(b, Weight::unit(c.p), 2.0), w = bmo2_norm(b, Weight::unit(c.p));
    return std::max(std::abs(a - q), std::abs(a - w)) / a;
}

// ----------------------------------------------------------- operator_algebra

double op_linearity(const Ctx& c) {
    const LinearOperator T =
        add(theta(c.symbol(0), shift(random_shift(c.p, 0, std::min(1, c.p.J() - 1), c.sub(1)))), pi(c.symbol(2)));
    const StepFunction f = c.f(3), g = c.f(4);
    const double a = 1.7, b = -0.3;
    return rel(T(a * f + b * g), a * T(f) + b * T(g), f);
}

double product_decomposition(const Ctx& c) {
    const StepFunction b = c.symbol(0), f = c.f(1);
    const StepFunction lhs = multiply(b, f) - (frak_p(b)(f) + pi(f)(b));
    return rel(lhs, StepFunction::constant(c.p, b.integral() * f.integral()), f);
}

/// i, j drawn from 0..min(3, J-1).
ShiftData trial_shift(const Ctx& c, std::uint64_t s) {
    const int top = std::min(3, c.p.J() - 1);
    return random_shift(c.p, c.pick(s, 0, top), c.pick(s + 1, 0, top), c.sub(s + 2));
}

double closed_form(const Ctx& c) {
    const StepFunction b = c.symbol(0);
    const ShiftData d = trial_shift(c, 10);
    const LinearOperator S = shift(d);
    double worst = 0.0;
    for (int k = 0; k <= 4; ++k) worst = std::max(worst, same_op(c, theta_shift_closed_form(b, d, k), theta_iter(b, S, k)));
    return worst;
}

double u_recursion(const Ctx& c) {
    const StepFunction b = c.symbol(0);
    const ShiftData d = trial_shift(c, 10);
    const LinearOperator S = shift(d);
    const LinearOperator Ui = u_operator(b, d.i()), Uj = u_operator(b, d.j());
    double worst = 0.0;
    for (int k = 1; k <= 4; ++k) {
        const LinearOperator prev = theta_iter(b, S, k - 1);
        worst = std::max(worst, same_op(c, subtract(compose(Uj, prev), compose(prev, Ui)), theta_iter(b, S, k)));
    }
    return worst;
}

double zero_operators(const Ctx& c) {
    const StepFunction a = c.symbol(0), b = c.symbol(1), cc = c.symbol(2);
    const LinearOperator ops[] = {theta(b, gamma(b)), theta(b, shift(random_shift(c.p, 0, 0, c.sub(3)))),
                                  theta(cc, lambda_tilde(a, b))};
    double worst = 0.0;
    for (const auto& T : ops) {
        if (c.p.cells() <= kDenseLimit) {
            worst = std::max(worst, materialize(T).cwiseAbs().maxCoeff());
        } else {
            worst = std::max({worst, zero_on(T, c.f(4)), zero_on(T.adjoint(), c.f(5))});
        }
    }
    return worst;
}

double switch_identity(const Ctx& c) {
    const StepFunction a = c.mean_zero(0), b = c.mean_zero(1), cc = c.mean_zero(2), f = c.mean_zero(3);
    return same_on(theta(cc, lambda(a, b)), compose(pi(a), lambda(cc, b)), f);
}

double theta_pi(const Ctx& c) {
    const StepFunction a = c.symbol(0), b = c.mean_zero(1), f = c.mean_zero(2);
    const LinearOperator rhs = add(add(compose(pi(a), pi(b)), compose(pi(a), gamma(b))),
                                   subtract(lambda(a, b), lambda_tilde(a, b)));
    return same_on(theta(b, pi(a)), rhs, f);
}

double theta_pi_star(const Ctx& c) {
    const StepFunction a = c.symbol(0), b = c.mean_zero(1), f = c.mean_zero(2);
    const LinearOperator Psa = pi_star(a);
    const LinearOperator rhs = subtract(
        lambda(b, a), add(add(compose(pi_star(b), Psa), compose(gamma(b), Psa)), compose(pi(b), Psa)));
    return same_on(theta(b, Psa), rhs, f);
}

double comm_decomposition(const Ctx& c) {
    const StepFunction b = c.symbol(0);
    const LinearOperator S = shift(trial_shift(c, 10));
    double r = same_op(c, commutator(b, S), add(bracket(frak_p(b), S), theta(b, S)));
    const StepFunction b0 = c.mean_zero(1);
    for (const LinearOperator& T : {pi(c.symbol(2)), noncancellative_shift00(c.p, c.sub(3)).op(),
                                    martingale(MartingaleSigns::random(c.p, c.sub(4)))})
        r = std::max(r, same_op(c, commutator(b0, T), add(bracket(frak_p(b0), T), theta(b0, T))));
    return r;
}

/// Finite-tree defects of the identities above for inputs with non-zero root averages.
double root_defects(const Ctx& c) {
    const TreeParams& p = c.p;
    const StepFunction a = c.symbol(0), b = c.symbol(1), f = c.f(2);
    const double beta0 = b.integral();
    const StepFunction one = StepFunction::constant(p, 1.0);
    // [b,T] - [P_b,T] - Theta_b(T) = beta0 [E,T], E f = <f> 1.
    const LinearOperator T = pi(c.symbol(3));
    const LinearOperator E(
        p, [](const Vec& v) { return Vec::Constant(v.size(), v.mean()); },
        [](const Vec& v) { return Vec::Constant(v.size(), v.mean()); }, json{{"root_average", json::object()}});
    double r = same_on(subtract(commutator(b, T), add(bracket(frak_p(b), T), theta(b, T))), scale(beta0, bracket(E, T)),
                       f);
    // Theta_b(Pi_a) defect: beta0 <f> Pi_a 1.
    const LinearOperator rhs_pi = add(add(compose(pi(a), pi(b)), compose(pi(a), gamma(b))),
                                      subtract(lambda(a, b), lambda_tilde(a, b)));
    r = std::max(r, rel(theta(b, pi(a))(f) - rhs_pi(f), (beta0 * f.integral()) * pi(a)(one), f));
    // Theta_b(Pi*_a) defect: -beta0 (sum a f) 1.
    const LinearOperator Psa = pi_star(a);
    const LinearOperator rhs_star =
        subtract(lambda(b, a), add(add(compose(pi_star(b), Psa), compose(gamma(b), Psa)), compose(pi(b), Psa)));
    const double af = analyze(a).flat().tail(p.cells() - 1).dot(analyze(f).flat().tail(p.cells() - 1));
    r = std::max(r, rel(theta(b, Psa)(f) - rhs_star(f), StepFunction::constant(p, -beta0 * af), f));
    return r;
}

double binomial(int m, int k) {
    double r = 1.0;
    for (int t = 1; t <= k; ++t) r = r * (m - k + t) / t;
    return r;
}

double binomial_comp(const Ctx& c) {
    const StepFunction b = c.symbol(0);
    const LinearOperator S = pi(c.symbol(1)), T = shift(trial_shift(c, 10));
    double worst = 0.0;
    for (int m = 1; m <= 4; ++m) {
        LinearOperator sum = zero_operator(c.p);
        for (int k = 0; k <= m; ++k)
            sum = add(sum, scale(binomial(m, k), compose(theta_iter(b, S, m - k), theta_iter(b, T, k))));
        worst = std::max(worst, same_on(theta_iter(b, compose(S, T), m), sum, c.f(20 + m)));
    }
    return worst;
}

double binomial_comm(const Ctx& c) {
    const StepFunction b = c.symbol(0);
    const LinearOperator S = frak_p(b), T = shift(trial_shift(c, 10));
    double worst = 0.0;
    for (int M = 1; M <= 4; ++M) {
        LinearOperator sum = zero_operator(c.p);
        for (int m = 0; m <= M; ++m)
            sum = add(sum, scale(binomial(M, m), bracket(theta_iter(b, S, M - m), theta_iter(b, T, m))));
        worst = std::max(worst, same_on(theta_iter(b, bracket(S, T), M), sum, c.f(20 + M)));
    }
    return worst;
}

double theta_rules(const Ctx& c) {
    const StepFunction b = c.symbol(0);
    const LinearOperator S = lambda(c.symbol(1), c.symbol(2)), T = shift(trial_shift(c, 10));
    const double r1 = same_op(c, theta(b, compose(S, T)), add(compose(theta(b, S), T), compose(S, theta(b, T))));
    const double r2 = same_op(c, theta(b, bracket(S, T)), add(bracket(theta(b, S), T), bracket(S, theta(b, T))));
    const LinearOperator U = pi_star(c.symbol(3));
    const double r3 = same_op(c, theta(b, add(U, scale(-2.5, T))), add(theta(b, U), scale(-2.5, theta(b, T))));
    return std::max({r1, r2, r3});
}

double comm2_expansion(const Ctx& c) {
    const StepFunction b = c.mean_zero(0);
    const LinearOperator S = shift(trial_shift(c, 10));
    const LinearOperator P = frak_p(b);
    const LinearOperator rhs = add(add(bracket(theta(b, P), S), bracket(P, theta(b, S))), theta_iter(b, S, 2));
    double r = same_op(c, theta(b, commutator(b, S)), rhs);
    // C_b^2 = [P_b, C_b^1] + Theta_b(C_b^1) once more.
    const LinearOperator C1 = commutator(b, S);
    return std::max(r, same_op(c, commutator_iter(b, S, 2), add(bracket(P, C1), theta(b, C1))));
}

double shift00_termwise(const Ctx& c) {
    const StepFunction b = c.symbol(0);
    const NonCancellativeShift00 s = noncancellative_shift00(c.p, c.sub(1));
    double worst = 0.0;
    for (int k = 1; k <= 2; ++k)
        worst = std::max(worst, same_op(c, theta_iter(b, s.op(), k),
                                        add(theta_iter(b, pi(s.a), k), theta_iter(b, pi_star(s.d), k))));
    return worst;
}

double paraproduct_shift(const Ctx& c) {
    const StepFunction b = c.symbol(0);
    const LinearOperator S = scale(bmo2_norm(b), shift(paraproduct_as_shift(b)));
    return same_op(c, S, pi(b));
}

double shift_mean_zero(const Ctx& c) {
    const LinearOperator S = shift(trial_shift(c, 10));
    const StepFunction f = c.f(0);
    const double r1 = S(StepFunction::constant(c.p, 1.0)).values().norm();
    const double r2 = std::abs(S(f).integral()) / f.values().norm();
    return std::max(r1, r2);
}

double pi_star_average(const Ctx& c) {
    const TreeParams& p = c.p;
    const StepFunction b = c.symbol(0), f = c.f(1);
    const HaarExpansion eb = analyze(b), ef = analyze(f);
    const StepFunction out = pi_star(b)(f);
    double worst = 0.0, scale = 0.0;
    for (const auto& Q : all_cubes(p, p.J())) {
        double sum = 0.0;
        for (const auto& R : all_cubes(p, p.J() - 1)) {
            double bf = 0.0;
            for (Signature s : cancellative_signatures(p.n())) bf += eb.coeff(R, s) * ef.coeff(R, s);
            if (R.contains(Q)) {
                sum += bf / R.volume();
            } else if (Q.contains(R)) {
                sum += bf / Q.volume();
            }
        }
        const double avg = average(out, Q);
        worst = std::max(worst, std::abs(avg - sum));
        scale = std::max(scale, std::abs(avg));
    }
    return worst / std::max(scale, 1e-300);
}

double bmo_sigma_localization(const Ctx& c) {
    const TreeParams& p = c.p;
    const StepFunction b = c.symbol(0);
    const LinearOperator T = martingale(MartingaleSigns::random(p, c.sub(1)));
    const StepFunction Tb = T(b);
    double worst = 0.0;
    for (const auto& Q : all_cubes(p, p.J())) {
        const StepFunction ind = StepFunction::indicator(p, Q);
        const StepFunction lhs = multiply(ind, Tb - StepFunction::constant(p, average(Tb, Q)));
        const StepFunction rhs = T(multiply(ind, b - StepFunction::constant(p, average(b, Q))));
        worst = std::max(worst, rel(lhs, rhs, b));
    }
    return worst;
}

double u_bound(const Ctx& c) {
    const TreeParams& p = c.p;
    double violations = 0.0;
    for (const StepFunction& b : {log_symbol(p), random_bmo_symbol(c.sub(0), p, SymbolTarget::unweighted()).b}) {
        const double norm = bmo2_norm(b);
        for (const auto& Q : all_cubes(p, p.J()))
            for (int j = 1; j <= std::min(4, Q.g); ++j) {
                const double d = std::abs(average(b, Q) - average(b, *ancestor(Q, j)));
                if (d > j * std::ldexp(1.0, p.n()) * norm * (1.0 + 1e-12)) violations += 1.0;
            }
    }
    return violations;
}

double adjoints(const Ctx& c) {
    const StepFunction b = c.symbol(0);
    const LinearOperator P = pi(b), Ps = pi_star(b), G = gamma(b);
    const LinearOperator others[] = {theta_iter(b, shift(trial_shift(c, 10)), 2), commutator(b, pi(c.symbol(1))),
                                     lambda(c.symbol(2), b), u_operator(b, 1), shift(random_shift(c.p, 0, 0, c.sub(3), false))};
    double worst = 0.0;
    if (c.p.cells() <= kDenseLimit) {
        const Eigen::MatrixXd MP = materialize(P);
        worst = std::max(worst, max_entry_rel(MP.transpose(), materialize(Ps)));
        const Eigen::MatrixXd MG = materialize(G);
        worst = std::max(worst, max_entry_rel(MG.transpose(), MG));
        for (const auto& T : others) worst = std::max(worst, max_entry_rel(materialize(T).transpose(), materialize_adjoint(T)));
    } else {
        const StepFunction f = c.f(4), g = c.f(5);
        auto pairing = [&](const LinearOperator& T, const LinearOperator& Tadj) {
            const double lhs = inner_product(T(f), g), rhs = inner_product(f, Tadj(g));
            return std::abs(lhs - rhs) / std::max({T(f).l2_norm() * g.l2_norm(), f.l2_norm() * Tadj(g).l2_norm(), f.l2_norm() * g.l2_norm()});
        };
        worst = std::max({pairing(P, Ps), pairing(Ps, P), pairing(G, G)});
        for (const auto& T : others) worst = std::max(worst, pairing(T, T.adjoint()));
    }
    return worst;
}

double exhaustive_small(const Ctx& c) {
    const StepFunction b = c.symbol(0);
    const LinearOperator S = pi(c.symbol(1)), T = shift(trial_shift(c, 10));
    const double k = -1.25;
    const Eigen::MatrixXd lhs = materialize(theta(b, add(S, scale(k, T))));
    const Eigen::MatrixXd rhs = materialize(add(theta(b, S), scale(k, theta(b, T))));
    return max_entry_rel(lhs, rhs);
}

std::vector<Check> checks() {
    const std::string dc = "dyadic_core", ws = "weighted_spaces", oa = "operator_algebra";
    return {
        {"dc.roundtrip", dc, false, 99, roundtrip},
        {"dc.parseval", dc, false, 99, parseval},
        {"dc.orthonormality", dc, true, 4, orthonormality},
        {"dc.telescoping", dc, false, 6, telescoping},
        {"dc.product_rule", dc, true, 4, product_rule},
        {"dc.partition_nesting", dc, true, 5, partition_nesting},
        {"ws.ap_bounds", ws, false, 99, ap_bounds},
        {"ws.conjugate_ap", ws, false, 99, conjugate_ap},
        {"ws.bloom_swap", ws, false, 99, bloom_swap},
        {"ws.weighted_l2_inner", ws, false, 99, weighted_l2_inner},
        {"ws.square_function", ws, false, 99, square_function_oracle},
        {"ws.shifted_square_function", ws, false, 5, shifted_square_oracle},
        {"ws.maximal", ws, false, 99, maximal_oracle},
        {"ws.bmo2_two_ways", ws, false, 99, bmo_two_ways},
        {"oa.linearity", oa, false, 99, op_linearity},
        {"oa.01_product_decomposition", oa, false, 99, product_decomposition},
        {"oa.02_closed_form", oa, false, 99, closed_form},
        {"oa.03_u_recursion", oa, false, 99, u_recursion},
        {"oa.04_zero_operators", oa, false, 99, zero_operators},
        {"oa.05_switch", oa, false, 99, switch_identity},
        {"oa.06_theta_pi", oa, false, 99, theta_pi},
        {"oa.06_theta_pi_star", oa, false, 99, theta_pi_star},
        {"oa.07_comm_decomposition", oa, false, 99, comm_decomposition},
        {"oa.07_root_defects", oa, false, 99, root_defects},
        {"oa.08_binomial_comp", oa, false, 99, binomial_comp},
        {"oa.08_binomial_comm", oa, false, 99, binomial_comm},
        {"oa.09_pi_star_average", oa, false, 5, pi_star_average},
        {"oa.10_bmo_sigma_localization", oa, false, 99, bmo_sigma_localization},
        {"oa.11_adjoints", oa, false, 99, adjoints},
        {"oa.12_theta_linearity_dense", oa, false, 3, exhaustive_small},
        {"oa.theta_rules", oa, false, 99, theta_rules},
        {"oa.comm2_expansion", oa, false, 99, comm2_expansion},
        {"oa.shift00_termwise", oa, false, 99, shift00_termwise},
        {"oa.paraproduct_as_shift", oa, false, 99, paraproduct_shift},
        {"oa.shift_mean_zero", oa, false, 99, shift_mean_zero},
        {"oa.u_bound", oa, true, 99, u_bound},
    };
}

}  // namespace

json IdentityResult::to_json() const {
    return json{{"name", name}, {"group", group}, {"checks", checks}, {"max_residual", max_residual}, {"passed", passed}};
}

bool IdentityReport::passed() const {
    return std::all_of(results.begin(), results.end(), [](const IdentityResult& r) { return r.passed; });
}

json IdentityReport::to_json() const {
    json rows = json::array();
    for (const auto& r : results) rows.push_back(r.to_json());
    return json{{"dims", options.dims},   {"depths", options.depths}, {"trials", options.trials},
                {"seed", options.seed},   {"tol", options.tol},       {"passed", passed()},
                {"identities", rows}};
}

std::string IdentityReport::to_text() const {
    std::ostringstream os;
    for (const auto& r : results)
        os << (r.passed ? "PASS " : "FAIL ") << r.name << " checks=" << r.checks
           << " max_residual=" << format_double(r.max_residual) << '\n';
    os << (passed() ? "all identities passed" : "some identities failed") << " (tol " << format_double(options.tol)
       << ")\n";
    return os.str();
}

std::vector<std::string> identity_names() {
    std::vector<std::string> out;
    for (const auto& c : checks()) out.push_back(c.name);
    return out;
}

IdentityReport identity_suite(const SuiteOptions& options) {
    IdentityReport report{options, {}};
    const auto all = checks();
    for (std::size_t id = 0; id < all.size(); ++id) {
        const Check& chk = all[id];
        if (options.filter && chk.name.find(*options.filter) == std::string::npos) continue;
        IdentityResult res{chk.name, chk.group};
        for (int n : options.dims)
            for (int J : options.depths) {
                if (J > chk.max_J) continue;
                const TreeParams p(n, J);
                const int trials = chk.once ? 1 : options.trials;
                for (int t = 0; t < trials; ++t) {
                    const std::uint64_t key = (static_cast<std::uint64_t>(n) << 48) ^
                                              (static_cast<std::uint64_t>(J) << 32) ^ static_cast<std::uint64_t>(t);
                    const Ctx ctx{p, detail::mix_seed(detail::mix_seed(options.seed, key), id), t};
                    const double r = chk.run(ctx);
                    ++res.checks;
                    res.max_residual = std::max(res.max_residual, std::isnan(r) ? INFINITY : r);
                }
            }
        res.passed = res.max_residual <= options.tol;
        report.results.push_back(res);
    }
    return report;
}

}  // namespace dyadic
