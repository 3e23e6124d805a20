#include <cmath>
#include <random>

#include "dyadic/detail/coeff_ops.hpp"
#include "dyadic/detail/lanczos.hpp"
#include "dyadic/detail/random.hpp"
#include "dyadic/errors.hpp"
#include "dyadic/norms.hpp"

namespace dyadic {

using nlohmann::json;
using Vec = Eigen::VectorXd;

NormResult square_function_norm_l2(const Weight& w, const L2Options& opt) {
    const TreeParams p = w.params();
    const Vec wp = detail::pyramid_of_values(p, w.values());
    auto m = std::make_shared<Vec>(Vec::Zero(static_cast<Eigen::Index>(p.cells())));
    for (int g = 0; g < p.J(); ++g)
        for (std::size_t z = 0; z < p.cubes_at(g); ++z)
            for (unsigned e = 0; e < p.ones(); ++e)
                (*m)[static_cast<Eigen::Index>(detail::slot(p, g, z, e))] =
                    std::sqrt(wp[static_cast<Eigen::Index>(p.level_offset(g) + z)]);
    // ||L f||_{L^2} = ||S_D f||_{L^2(w)} for the Haar multiplier L by sqrt(<w>_Q).
    auto act = [p, m = std::shared_ptr<const Vec>(m)](const Vec& f) {
        return detail::synthesize_values(p, detail::analyze_values(p, f).cwiseProduct(*m));
    };
    const LinearOperator L(p, act, act, json{{"square_function_isometry", json::object()}});
    return opnorm_l2(L, w, Weight::unit(p), opt);
}

namespace {

/// Linearization of the shifted square function for fixed coefficient signs.
///
/// Output index (level_offset(g) + zq) * s + e for Q at generation g; unused entries stay zero.
struct ShiftedLinearization {
    TreeParams p;
    int i, j;
    ShiftedReading reading;
    Vec sqrt_w_avg;   // sqrt(<w>_Q), pyramid layout
    Vec in_scale;     // 1 / sqrt(w vol), row-major
    Vec signs;        // flat coefficient layout

    Eigen::Index out_size() const { return static_cast<Eigen::Index>(p.pyramid_size() * p.ones()); }

    template <class Fn>
    void for_each_group(Fn fn) const {
        for (int g = j; g <= p.J() - 1; ++g) {
            const int h = g - j + i;
            if (h > p.J() - 1) break;
            for (std::size_t zr = 0; zr < p.cubes_at(g - j); ++zr) fn(g, h, zr);
        }
    }

    Vec apply(const Vec& x) const {
        const int n = p.n();
        const unsigned ones = p.ones();
        const Vec c = detail::analyze_values(p, x.cwiseProduct(in_scale));
        Vec y = Vec::Zero(out_size());
        std::vector<double> A(ones);
        for_each_group([&](int g, int h, std::size_t zr) {
            std::fill(A.begin(), A.end(), 0.0);
            for (std::size_t zp = zr << (i * n); zp < (zr + 1) << (i * n); ++zp)
                for (unsigned e = 0; e < ones; ++e) {
                    const auto s = static_cast<Eigen::Index>(detail::slot(p, h, zp, e));
                    A[e] += signs[s] * c[s];
                }
            if (reading == ShiftedReading::joint) {
                double t = 0.0;
                for (double a : A) t += a;
                std::fill(A.begin(), A.end(), 0.0);
                A[0] = t;
            }
            for (std::size_t zq = zr << (j * n); zq < (zr + 1) << (j * n); ++zq) {
                const std::size_t q = p.level_offset(g) + zq;
                for (unsigned e = 0; e < ones; ++e)
                    y[static_cast<Eigen::Index>(q * ones + e)] = sqrt_w_avg[static_cast<Eigen::Index>(q)] * A[e];
            }
        });
        return y;
    }

    Vec apply_transpose(const Vec& y) const {
        const int n = p.n();
        const unsigned ones = p.ones();
        Vec c = Vec::Zero(static_cast<Eigen::Index>(p.cells()));
        std::vector<double> T(ones);
        for_each_group([&](int g, int h, std::size_t zr) {
            std::fill(T.begin(), T.end(), 0.0);
            for (std::size_t zq = zr << (j * n); zq < (zr + 1) << (j * n); ++zq) {
                const std::size_t q = p.level_offset(g) + zq;
                for (unsigned e = 0; e < ones; ++e)
                    T[e] += sqrt_w_avg[static_cast<Eigen::Index>(q)] * y[static_cast<Eigen::Index>(q * ones + e)];
            }
            if (reading == ShiftedReading::joint) std::fill(T.begin() + 1, T.end(), T[0]);
            for (std::size_t zp = zr << (i * n); zp < (zr + 1) << (i * n); ++zp)
                for (unsigned e = 0; e < ones; ++e) {
                    const auto s = static_cast<Eigen::Index>(detail::slot(p, h, zp, e));
                    c[s] += signs[s] * T[e];
                }
        });
        // The transpose of analysis is vol times synthesis.
        return (detail::synthesize_values(p, c) * p.cell_volume()).cwiseProduct(in_scale);
    }
};

}  // namespace

NormResult shifted_square_function_norm_l2(const Weight& w, int i, int j, int budget, std::uint64_t seed,
                                           ShiftedReading reading) {
    if (i < 0 || j < 0) throw InvalidArgument("shift parameters must be non-negative");
    const TreeParams p = w.params();
    ShiftedLinearization L{p, i, j, reading, detail::pyramid_of_values(p, w.values()).cwiseSqrt(),
                           (w.values() * p.cell_volume()).cwiseSqrt().cwiseInverse(),
                           Vec::Ones(static_cast<Eigen::Index>(p.cells()))};
    NormResult r;
    r.method = "ascent_lower";
    r.seed = seed;
    std::mt19937_64 rng(seed);
    const Eigen::Index N = static_cast<Eigen::Index>(p.cells());
    Vec start(N);
    for (Eigen::Index k = 0; k < N; ++k) start[k] = detail::uniform_pm1(rng);
    int rounds = 0;
    for (int s = 0; rounds < budget; ++s) {
        if (s > 0)
            for (Eigen::Index k = 1; k < N; ++k) L.signs[k] = (rng() >> 63) ? 1.0 : -1.0;
        for (int it = 0; it < 20 && rounds < budget; ++it) {
            ++rounds;
            const auto top = detail::top_singular([&](const Vec& x) { return L.apply(x); },
                                                  [&](const Vec& y) { return L.apply_transpose(y); }, start, 1e-10,
                                                  2000, 200);
            const StepFunction f(p, top.right.cwiseProduct(L.in_scale));
            const double ratio =
                weighted_lp_norm(shifted_square_function(f, i, j, reading), w, 2.0) / weighted_lp_norm(f, w, 2.0);
            if (ratio > r.value) {
                r.value = ratio;
                r.certificate = f;
            }
            const Vec c = detail::analyze_values(p, f.values());
            Vec next = c.unaryExpr([](double v) { return v < 0.0 ? -1.0 : 1.0; });
            next[0] = 1.0;
            const bool same = (next - L.signs).cwiseAbs().maxCoeff() == 0.0;
            L.signs = next;
            start = top.right;
            if (same) break;
        }
    }
    r.iterations = rounds;
    return r;
}

namespace {

/// Pyramid index of the cube maximizing <|f|>_Q over the cubes containing each Morton cell.
std::vector<std::size_t> maximizing_cubes(const TreeParams& p, const Vec& pyr) {
    const unsigned k = p.children();
    std::vector<std::size_t> arg(p.pyramid_size());
    arg[0] = 0;
    for (int g = 0; g < p.J(); ++g) {
        const std::size_t o = p.level_offset(g), oc = p.level_offset(g + 1);
        for (std::size_t z = 0; z < p.cubes_at(g); ++z)
            for (unsigned c = 0; c < k; ++c) {
                const std::size_t child = oc + z * k + c;
                const std::size_t parent_best = arg[o + z];
                arg[child] = pyr[static_cast<Eigen::Index>(child)] > pyr[static_cast<Eigen::Index>(parent_best)]
                                 ? child
                                 : parent_best;
            }
    }
    return std::vector<std::size_t>(arg.begin() + static_cast<std::ptrdiff_t>(p.level_offset(p.J())), arg.end());
}

}  // namespace

NormResult maximal_norm_lower(const Weight& w, double p_exp, int budget, std::uint64_t seed) {
    if (!(p_exp > 1.0)) throw InvalidArgument("maximal_norm_lower needs p > 1");
    const TreeParams p = w.params();
    const Eigen::Index N = static_cast<Eigen::Index>(p.cells());
    const Vec wm = detail::to_morton(p, w.values());
    std::vector<double> cells_in(p.pyramid_size());
    for (int g = 0; g <= p.J(); ++g)
        for (std::size_t z = 0; z < p.cubes_at(g); ++z)
            cells_in[p.level_offset(g) + z] = std::ldexp(1.0, (p.J() - g) * p.n());
    auto wnorm = [&](const Vec& f) { return std::pow((f.array().abs().pow(p_exp) * wm.array()).sum(), 1.0 / p_exp); };

    NormResult r;
    r.method = "ascent_lower";
    r.seed = seed;
    std::mt19937_64 rng(seed);
    Vec best = Vec::Ones(N);
    int evals = 0;
    for (int start = 0; evals < budget; ++start) {
        Vec f(N);
        if (start == 0) {
            f = wm.array().pow(1.0 / (1.0 - p_exp)).matrix();
        } else {
            for (Eigen::Index k = 0; k < N; ++k) f[k] = detail::uniform01(rng) + 1e-3;
        }
        double prev = -1.0;
        for (int s = 0; s < 30 && evals < budget; ++s) {
            f /= wnorm(f);
            Vec pyr(static_cast<Eigen::Index>(p.pyramid_size()));
            detail::averages(p, f.data(), pyr.data());
            const auto arg = maximizing_cubes(p, pyr);
            Vec Mf(N);
            for (Eigen::Index x = 0; x < N; ++x) Mf[x] = pyr[static_cast<Eigen::Index>(arg[x])];
            ++evals;
            const double ratio = wnorm(Mf);
            if (ratio > r.value) {
                r.value = ratio;
                best = f;
            }
            if (ratio - prev <= 1e-13 * ratio) break;
            prev = ratio;
            // Gradient of ||L f||_p^p for the frozen selection L, pulled back through L^T.
            std::vector<double> acc(p.pyramid_size(), 0.0);
            for (Eigen::Index x = 0; x < N; ++x) acc[arg[x]] += std::pow(Mf[x], p_exp - 1.0) * wm[x];
            for (std::size_t q = 0; q < acc.size(); ++q) acc[q] /= cells_in[q];
            Vec d = Vec::Zero(N);
            detail::push_down_add(p, acc.data(), d.data());
            f = (d.array() / wm.array()).pow(1.0 / (p_exp - 1.0)).matrix();
        }
    }
    r.iterations = evals;
    r.certificate = StepFunction(p, detail::from_morton(p, best));
    return r;
}

NormResult maximal_norm_upper_l2(const Weight& w, std::size_t cap) {
    const TreeParams p = w.params();
    if (p.cells() > cap) throw CapExceeded("maximal_norm_upper_l2 exceeds the materialization cap");
    const Vec wm = detail::to_morton(p, w.values());
    const Vec wp = detail::pyramid_of_values(p, w.values());
    const Vec in_scale = wm.cwiseSqrt().cwiseInverse();  // x = sqrt(w) f in Morton order, volume factored out
    // y_Q = sqrt(<w>_Q) <f>_Q; ||y||^2 bounds ||Mf||^2_{L^2(w)} / vol.
    auto A = [&](const Vec& x) {
        Vec pyr(static_cast<Eigen::Index>(p.pyramid_size()));
        const Vec f = x.cwiseProduct(in_scale);
        detail::averages(p, f.data(), pyr.data());
        for (int g = 0; g <= p.J(); ++g) {
            const double s = std::sqrt(p.volume(g) / p.cell_volume());
            for (std::size_t z = 0; z < p.cubes_at(g); ++z) {
                const auto q = static_cast<Eigen::Index>(p.level_offset(g) + z);
                pyr[q] *= std::sqrt(wp[q]) * s;
            }
        }
        return pyr;
    };
    auto At = [&](const Vec& y) {
        std::vector<double> acc(p.pyramid_size());
        for (int g = 0; g <= p.J(); ++g) {
            const double s = std::sqrt(p.volume(g) / p.cell_volume());
            const double cells = std::ldexp(1.0, (p.J() - g) * p.n());
            for (std::size_t z = 0; z < p.cubes_at(g); ++z) {
                const auto q = static_cast<Eigen::Index>(p.level_offset(g) + z);
                acc[static_cast<std::size_t>(q)] = y[q] * std::sqrt(wp[q]) * s / cells;
            }
        }
        Vec d = Vec::Zero(static_cast<Eigen::Index>(p.cells()));
        detail::push_down_add(p, acc.data(), d.data());
        return d.cwiseProduct(in_scale).eval();
    };
    const auto top = detail::top_singular(A, At, Vec::Ones(static_cast<Eigen::Index>(p.cells())), 1e-12, 5000, 300);
    NormResult r;
    r.value = top.sigma;
    r.method = "carleson_upper";
    r.iterations = top.iterations;
    return r;
}

}  // namespace dyadic
