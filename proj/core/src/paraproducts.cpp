#include "dyadic/paraproducts.hpp"

#include <cmath>
#include <random>

#include "dyadic/detail/coeff_ops.hpp"
#include "dyadic/detail/random.hpp"
#include "dyadic/errors.hpp"

namespace dyadic {

using nlohmann::json;

namespace detail {

Analysis analyze_full(const TreeParams& p, const Eigen::VectorXd& row_major) {
    Analysis a;
    Eigen::VectorXd vm = to_morton(p, row_major);
    a.pyr.resize(static_cast<Eigen::Index>(p.pyramid_size()));
    averages(p, vm.data(), a.pyr.data());
    a.coeffs.resize(vm.size());
    coefficients_from_pyramid(p, a.pyr.data(), a.coeffs.data());
    return a;
}

Eigen::VectorXd synthesize_with_indicators(const TreeParams& p, const Eigen::VectorXd& coeffs,
                                           const Eigen::VectorXd& ind) {
    Eigen::VectorXd vm(coeffs.size());
    synthesize(p, coeffs.data(), vm.data());
    if (ind.size() > 0) push_down_add(p, ind.data(), vm.data());
    return from_morton(p, vm);
}

Symbol Symbol::of(const StepFunction& b) {
    Analysis a = analyze_full(b.params(), b.values());
    return Symbol{std::move(a.coeffs), std::move(a.pyr)};
}

}  // namespace detail

namespace {

using detail::Analysis;
using detail::Symbol;
using Vec = Eigen::VectorXd;

json symbol_tag(const StepFunction& b) { return json{{"l2", b.l2_norm()}}; }

/// out(Q,e) = c(Q,e) * m(Q) for a per-cube multiplier m given in pyramid layout.
Vec scale_by_cube(const TreeParams& p, const Vec& c, const Vec& m) {
    Vec out = Vec::Zero(c.size());
    const unsigned ones = p.ones();
    for (int g = 0; g < p.J(); ++g) {
        const std::size_t base = std::size_t{1} << (g * p.n());
        const std::size_t o = p.level_offset(g);
        for (std::size_t z = 0; z < p.cubes_at(g); ++z) {
            const double mz = m[static_cast<Eigen::Index>(o + z)];
            for (unsigned e = 0; e < ones; ++e) {
                const auto s = static_cast<Eigen::Index>(base + z * ones + e);
                out[s] = c[s] * mz;
            }
        }
    }
    return out;
}

/// Per-cube sum over signatures of x(Q,e) y(Q,e), pyramid layout (finest level zero).
Vec pair_sums(const TreeParams& p, const Vec& x, const Vec& y) {
    Vec s = Vec::Zero(static_cast<Eigen::Index>(p.pyramid_size()));
    const unsigned ones = p.ones();
    for (int g = 0; g < p.J(); ++g) {
        const std::size_t base = std::size_t{1} << (g * p.n());
        const std::size_t o = p.level_offset(g);
        for (std::size_t z = 0; z < p.cubes_at(g); ++z) {
            double acc = 0.0;
            for (unsigned e = 0; e < ones; ++e) {
                const auto k = static_cast<Eigen::Index>(base + z * ones + e);
                acc += x[k] * y[k];
            }
            s[static_cast<Eigen::Index>(o + z)] = acc;
        }
    }
    return s;
}

void divide_by_volume(const TreeParams& p, Vec& s) {
    for (int g = 0; g <= p.J(); ++g) {
        const double inv = 1.0 / p.volume(g);
        const std::size_t o = p.level_offset(g);
        for (std::size_t z = 0; z < p.cubes_at(g); ++z) s[static_cast<Eigen::Index>(o + z)] *= inv;
    }
}

Vec pi_apply(const TreeParams& p, const Symbol& b, const Vec& f) {
    const Analysis a = detail::analyze_full(p, f);
    Vec out = scale_by_cube(p, b.coeffs, a.pyr);
    return detail::synthesize_values(p, out);
}

Vec pi_star_apply(const TreeParams& p, const Symbol& b, const Vec& f) {
    const Vec c = detail::analyze_values(p, f);
    Vec s = pair_sums(p, b.coeffs, c);
    divide_by_volume(p, s);
    Vec vm = Vec::Zero(f.size());
    detail::push_down_add(p, s.data(), vm.data());
    return detail::from_morton(p, vm);
}

Vec gamma_apply(const TreeParams& p, const Symbol& b, const Vec& f) {
    const Vec c = detail::analyze_values(p, f);
    Vec out = Vec::Zero(c.size());
    const unsigned ones = p.ones();
    for (int g = 0; g < p.J(); ++g) {
        const std::size_t base = std::size_t{1} << (g * p.n());
        const double scale = 1.0 / std::sqrt(p.volume(g));
        for (std::size_t z = 0; z < p.cubes_at(g); ++z) {
            const std::size_t k0 = base + z * ones;
            for (unsigned e = 0; e < ones; ++e) {
                const double be = b.coeffs[static_cast<Eigen::Index>(k0 + e)];
                if (be == 0.0) continue;
                for (unsigned h = 0; h < ones; ++h) {
                    if (h == e) continue;
                    const unsigned t = signature_add_bits(e, h, ones);
                    out[static_cast<Eigen::Index>(k0 + t)] += be * c[static_cast<Eigen::Index>(k0 + h)] * scale;
                }
            }
        }
    }
    return detail::synthesize_values(p, out);
}

Vec averaging_apply(const TreeParams& p, const Symbol& b, const Vec& f) {
    const Vec c = detail::analyze_values(p, f);
    return detail::synthesize_values(p, scale_by_cube(p, c, b.pyr));
}

Vec lambda_apply(const TreeParams& p, const Symbol& a, const Symbol& b, const Vec& f, bool tilde) {
    const Vec c = detail::analyze_values(p, f);
    Vec s = pair_sums(p, b.coeffs, c);
    divide_by_volume(p, s);
    if (!tilde) detail::accumulate_down(p, s.data());
    return detail::synthesize_values(p, scale_by_cube(p, a.coeffs, s));
}

Vec lambda_adjoint(const TreeParams& p, const Symbol& a, const Symbol& b, const Vec& g, bool tilde) {
    const Vec c = detail::analyze_values(p, g);
    Vec t = pair_sums(p, a.coeffs, c);
    if (!tilde) detail::subtree_sums(p, t.data());
    divide_by_volume(p, t);
    return detail::synthesize_values(p, scale_by_cube(p, b.coeffs, t));
}

}  // namespace

LinearOperator pi(const StepFunction& b) {
    auto sb = std::make_shared<const Symbol>(Symbol::of(b));
    const TreeParams p = b.params();
    return LinearOperator(
        p, [p, sb](const Vec& f) { return pi_apply(p, *sb, f); },
        [p, sb](const Vec& f) { return pi_star_apply(p, *sb, f); }, json{{"pi", {{"symbol", symbol_tag(b)}}}});
}

LinearOperator pi_star(const StepFunction& b) {
    return pi(b).adjoint().with_descriptor(json{{"pi_star", {{"symbol", symbol_tag(b)}}}});
}

LinearOperator gamma(const StepFunction& b) {
    auto sb = std::make_shared<const Symbol>(Symbol::of(b));
    const TreeParams p = b.params();
    auto act = [p, sb](const Vec& f) { return gamma_apply(p, *sb, f); };
    return LinearOperator(p, act, act, json{{"gamma", {{"symbol", symbol_tag(b)}}}});
}

LinearOperator frak_p(const StepFunction& b) {
    return add(add(pi(b), pi_star(b)), gamma(b)).with_descriptor(json{{"frak_p", {{"symbol", symbol_tag(b)}}}});
}

LinearOperator averaging_multiplier(const StepFunction& b) {
    auto sb = std::make_shared<const Symbol>(Symbol::of(b));
    const TreeParams p = b.params();
    auto act = [p, sb](const Vec& f) { return averaging_apply(p, *sb, f); };
    return LinearOperator(p, act, act, json{{"averaging_multiplier", {{"symbol", symbol_tag(b)}}}});
}

namespace {

LinearOperator make_lambda(const StepFunction& a, const StepFunction& b, bool tilde) {
    require_same(a.params(), b.params(), "lambda");
    auto sa = std::make_shared<const Symbol>(Symbol::of(a));
    auto sb = std::make_shared<const Symbol>(Symbol::of(b));
    const TreeParams p = a.params();
    return LinearOperator(
        p, [p, sa, sb, tilde](const Vec& f) { return lambda_apply(p, *sa, *sb, f, tilde); },
        [p, sa, sb, tilde](const Vec& g) { return lambda_adjoint(p, *sa, *sb, g, tilde); },
        json{{tilde ? "lambda_tilde" : "lambda", {{"a", symbol_tag(a)}, {"b", symbol_tag(b)}}}});
}

}  // namespace

LinearOperator lambda(const StepFunction& a, const StepFunction& b) { return make_lambda(a, b, false); }

LinearOperator lambda_tilde(const StepFunction& a, const StepFunction& b) { return make_lambda(a, b, true); }

MartingaleSigns::MartingaleSigns(const TreeParams& params, Eigen::VectorXd flat) : params_(params), flat_(std::move(flat)) {
    if (static_cast<std::size_t>(flat_.size()) != params_.cells())
        throw InvalidArgument("martingale signs need one slot per coefficient");
    flat_[0] = 0.0;
    if (max_abs() > 1.0) throw BoundViolation("martingale multipliers must satisfy |sigma| <= 1");
}

MartingaleSigns MartingaleSigns::constant(const TreeParams& params, double s) {
    return MartingaleSigns(params, Eigen::VectorXd::Constant(static_cast<Eigen::Index>(params.cells()), s));
}

MartingaleSigns MartingaleSigns::random(const TreeParams& params, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Eigen::VectorXd v(static_cast<Eigen::Index>(params.cells()));
    for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = (rng() >> 63) ? 1.0 : -1.0;
    return MartingaleSigns(params, std::move(v));
}

double MartingaleSigns::max_abs() const { return flat_.tail(flat_.size() - 1).cwiseAbs().maxCoeff(); }

LinearOperator martingale(const MartingaleSigns& sigma) {
    const TreeParams p = sigma.params();
    auto s = std::make_shared<const Vec>(sigma.flat());
    auto act = [p, s](const Vec& f) {
        Vec c = detail::analyze_values(p, f);
        c = c.cwiseProduct(*s);
        return detail::synthesize_values(p, c);
    };
    return LinearOperator(p, act, act, json{{"martingale", {{"max_abs", sigma.max_abs()}}}});
}

LinearOperator u_operator(const StepFunction& b, int j) {
    if (j < 0) throw InvalidArgument("U_(j) needs j >= 0");
    const TreeParams p = b.params();
    const Vec pyr = detail::pyramid_of_values(p, b.values());
    auto m = std::make_shared<Vec>(Vec::Zero(static_cast<Eigen::Index>(p.pyramid_size())));
    for (int g = j; g < p.J(); ++g)
        for (std::size_t z = 0; z < p.cubes_at(g); ++z) {
            const double here = pyr[static_cast<Eigen::Index>(p.level_offset(g) + z)];
            const double anc = pyr[static_cast<Eigen::Index>(p.level_offset(g - j) + (z >> (j * p.n())))];
            (*m)[static_cast<Eigen::Index>(p.level_offset(g) + z)] = here - anc;
        }
    auto act = [p, m = std::shared_ptr<const Vec>(m)](const Vec& f) {
        return detail::synthesize_values(p, scale_by_cube(p, detail::analyze_values(p, f), *m));
    };
    return LinearOperator(p, act, act, json{{"u", {{"j", j}, {"symbol", symbol_tag(b)}}}});
}

}  // namespace dyadic
