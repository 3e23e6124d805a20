#include "dyadic/families.hpp"

#include <cmath>
#include <random>

#include "dyadic/detail/kernels.hpp"
#include "dyadic/detail/random.hpp"
#include "dyadic/errors.hpp"

namespace dyadic {

namespace {

/// Mean of t^a over [lo, hi).
double power_mean(double a, double lo, double hi) {
    return (std::pow(hi, a + 1.0) - std::pow(lo, a + 1.0)) / ((a + 1.0) * (hi - lo));
}

/// Mean of log(1/t) over [lo, hi), via F(t) = t(1 - log t), F(0) = 0.
double log_mean(double lo, double hi) {
    auto F = [](double t) { return t > 0.0 ? t * (1.0 - std::log(t)) : 0.0; };
    return (F(hi) - F(lo)) / (hi - lo);
}

template <class CellFn>
StepFunction tabulate(const TreeParams& p, CellFn fn) {
    const std::size_t side = std::size_t{1} << p.J();
    const double h = std::ldexp(1.0, -p.J());
    Eigen::VectorXd v(static_cast<Eigen::Index>(p.cells()));
    std::vector<std::size_t> m(p.n());
    for (std::size_t cell = 0; cell < p.cells(); ++cell) {
        std::size_t rest = cell;
        for (int i = p.n() - 1; i >= 0; --i) {
            m[i] = rest % side;
            rest /= side;
        }
        v[static_cast<Eigen::Index>(cell)] = fn(m, h);
    }
    return StepFunction(p, std::move(v));
}

}  // namespace

Weight power_weight(double alpha, const TreeParams& params) {
    if (!(alpha > -1.0 && alpha < 1.0)) throw InvalidArgument("power weight needs -1 < alpha < 1");
    const std::size_t side = std::size_t{1} << params.J();
    const double h = std::ldexp(1.0, -params.J());
    std::vector<double> mean(side);
    for (std::size_t k = 0; k < side; ++k) mean[k] = power_mean(alpha, k * h, (k + 1) * h);
    return Weight(tabulate(params, [&](const std::vector<std::size_t>& m, double) {
        double v = 1.0;
        for (auto mi : m) v *= mean[mi];
        return v;
    }));
}

Weight cascade_weight(const TreeParams& params, double delta, std::uint64_t seed) {
    if (!(delta >= 0.0 && delta <= 0.4)) throw InvalidArgument("cascade weight needs 0 <= delta <= 0.4");
    const TreeParams& p = params;
    const unsigned k = p.children();
    std::vector<double> cur{1.0}, next;
    std::vector<double> t(k);
    for (int g = 0; g < p.J(); ++g) {
        std::mt19937_64 rng(detail::mix_seed(seed, static_cast<std::uint64_t>(g)));
        next.assign(p.cubes_at(g + 1), 0.0);
        for (std::size_t z = 0; z < p.cubes_at(g); ++z) {
            for (unsigned c = 0; c < k; ++c) t[c] = c < k / 2 ? 1.0 : -1.0;
            for (unsigned c = k - 1; c > 0; --c) {
                const auto r = static_cast<unsigned>(detail::uniform01(rng) * (c + 1));
                std::swap(t[c], t[std::min(r, c)]);
            }
            for (unsigned c = 0; c < k; ++c) next[z * k + c] = cur[z] * (1.0 + delta * t[c]);
        }
        cur.swap(next);
    }
    Eigen::VectorXd vm = Eigen::Map<Eigen::VectorXd>(cur.data(), static_cast<Eigen::Index>(cur.size()));
    return Weight(StepFunction(p, detail::from_morton(p, vm)));
}

Weight random_weight(const TreeParams& params, std::uint64_t seed, double spread) {
    std::mt19937_64 rng(seed);
    Eigen::VectorXd v(static_cast<Eigen::Index>(params.cells()));
    for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = std::exp(spread * detail::uniform_pm1(rng));
    return Weight(StepFunction(params, std::move(v)));
}

StepFunction log_symbol(const TreeParams& params, bool mean_zero) {
    const std::size_t side = std::size_t{1} << params.J();
    const double h = std::ldexp(1.0, -params.J());
    std::vector<double> mean(side);
    for (std::size_t k = 0; k < side; ++k) mean[k] = log_mean(k * h, (k + 1) * h);
    StepFunction b = tabulate(params, [&](const std::vector<std::size_t>& m, double) {
        double v = 0.0;
        for (auto mi : m) v += mean[mi];
        return v;
    });
    b = b * (1.0 / bmo2_norm(b));
    if (mean_zero) b = b - StepFunction::constant(params, b.integral());
    return b;
}

StepFunction random_haar_symbol(const TreeParams& params, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(params.cells()));
    for (int g = 0; g < params.J(); ++g) {
        const double s = std::sqrt(params.volume(g));
        for (std::size_t z = 0; z < params.cubes_at(g); ++z)
            for (unsigned e = 0; e < params.ones(); ++e)
                c[static_cast<Eigen::Index>(detail::slot(params, g, z, e))] = s * detail::uniform_pm1(rng);
    }
    return StepFunction(params, detail::synthesize_values(params, c));
}

StepFunction random_step_function(const TreeParams& params, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Eigen::VectorXd v(static_cast<Eigen::Index>(params.cells()));
    for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = detail::uniform_pm1(rng);
    return StepFunction(params, std::move(v));
}

RandomSymbol random_bmo_symbol(std::uint64_t seed, const TreeParams& params, const SymbolTarget& target) {
    StepFunction b = random_haar_symbol(params, seed);
    if (target.kind == SymbolTarget::Kind::bloom) {
        if (!target.nu) throw InvalidArgument("bloom target needs a weight");
        b = b * (1.0 / bmo2_norm(b, *target.nu));
    } else {
        b = b * (1.0 / bmo2_norm(b));
    }
    const double nb = bmo2_norm(b);
    const double nn = target.nu ? bmo2_norm(b, *target.nu) : std::nan("");
    return RandomSymbol{std::move(b), nb, nn};
}

}  // namespace dyadic
