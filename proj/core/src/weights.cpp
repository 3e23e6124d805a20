#include "dyadic/weights.hpp"

#include <algorithm>
#include <cmath>

#include "dyadic/detail/kernels.hpp"
#include "dyadic/errors.hpp"
#include "dyadic/haar.hpp"

namespace dyadic {

namespace {

void require_p(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw InvalidArgument("exponent must satisfy 1 < p < inf");
}

}  // namespace

Weight::Weight(StepFunction w) : w_(std::move(w)) {
    for (Eigen::Index k = 0; k < w_.values().size(); ++k)
        if (!(w_.values()[k] > 0.0) || !std::isfinite(w_.values()[k]))
            throw InvalidArgument("weight values must be finite and strictly positive");
}

double Weight::mass(const DyadicCube& Q) const { return average(w_, Q) * Q.volume(); }

WeightPair::WeightPair(Weight mu_, Weight lambda_, double p_) : mu(std::move(mu_)), lambda(std::move(lambda_)), p(p_) {
    require_p(p);
    require_same(mu.params(), lambda.params(), "weight pair");
}

double ap_characteristic(const Weight& w, double p) {
    require_p(p);
    const double q = p / (p - 1.0);
    const TreeParams& P = w.params();
    const Eigen::VectorXd a = detail::pyramid_of_values(P, w.values());
    const Eigen::VectorXd b = detail::pyramid_of_values(P, w.values().array().pow(1.0 - q).matrix());
    double best = 0.0;
    for (Eigen::Index k = 0; k < a.size(); ++k) best = std::max(best, a[k] * std::pow(b[k], p - 1.0));
    return best;
}

Weight conjugate_weight(const Weight& w, double p) {
    require_p(p);
    const double q = p / (p - 1.0);
    return Weight(pow(w.function(), 1.0 - q));
}

Weight bloom_weight(const Weight& mu, const Weight& lambda, double p) {
    require_p(p);
    require_same(mu.params(), lambda.params(), "bloom_weight");
    Eigen::VectorXd v = (mu.values().array().pow(1.0 / p) * lambda.values().array().pow(-1.0 / p)).matrix();
    return Weight(StepFunction(mu.params(), std::move(v)));
}

double weighted_lp_norm(const StepFunction& f, const Weight& w, double p) {
    require_same(f.params(), w.params(), "weighted_lp_norm");
    if (!(p >= 1.0)) throw InvalidArgument("weighted_lp_norm needs p >= 1");
    const double s = (f.values().array().abs().pow(p) * w.values().array()).sum() * f.params().cell_volume();
    return std::pow(s, 1.0 / p);
}

namespace {

/// sup over cubes of (integral_Q |b - <b>_Q|^r v dx) / w(Q), Morton sweep per generation.
double oscillation_sup(const StepFunction& b, const Eigen::VectorXd& v, const Weight& w, double r) {
    const TreeParams& P = b.params();
    require_same(P, w.params(), "bmo");
    const Eigen::VectorXd bm = detail::to_morton(P, b.values());
    const Eigen::VectorXd vm = detail::to_morton(P, v);
    const Eigen::VectorXd bp = detail::pyramid_of_values(P, b.values());
    const Eigen::VectorXd wp = detail::pyramid_of_values(P, w.values());
    const double cell = P.cell_volume();
    double best = 0.0;
    for (int g = 0; g <= P.J(); ++g) {
        const int shift = (P.J() - g) * P.n();
        const std::size_t per = std::size_t{1} << shift;
        for (std::size_t z = 0; z < P.cubes_at(g); ++z) {
            const double avg = bp[static_cast<Eigen::Index>(P.level_offset(g) + z)];
            double s = 0.0;
            for (std::size_t k = z * per; k < (z + 1) * per; ++k) {
                const double d = std::abs(bm[static_cast<Eigen::Index>(k)] - avg);
                s += (r == 1.0 ? d : (r == 2.0 ? d * d : std::pow(d, r))) * vm[static_cast<Eigen::Index>(k)];
            }
            const double mass = wp[static_cast<Eigen::Index>(P.level_offset(g) + z)] * P.volume(g);
            best = std::max(best, s * cell / mass);
        }
    }
    return best;
}

}  // namespace

double bmo_norm(const StepFunction& b, const Weight& w) {
    return oscillation_sup(b, Eigen::VectorXd::Ones(b.values().size()), w, 1.0);
}

double bmo_q_norm(const StepFunction& b, const Weight& w, double q) {
    require_p(q);
    const Eigen::VectorXd dual = w.values().array().pow(1.0 - q).matrix();
    return std::pow(oscillation_sup(b, dual, w, q), 1.0 / q);
}

double bmo2_norm(const StepFunction& b) {
    const TreeParams& P = b.params();
    const Eigen::VectorXd c = detail::analyze_values(P, b.values());
    std::vector<double> s(P.pyramid_size(), 0.0);
    for (int g = 0; g < P.J(); ++g)
        for (std::size_t z = 0; z < P.cubes_at(g); ++z) {
            double acc = 0.0;
            for (unsigned e = 0; e < P.ones(); ++e) {
                const double v = c[static_cast<Eigen::Index>(detail::slot(P, g, z, e))];
                acc += v * v;
            }
            s[P.level_offset(g) + z] = acc;
        }
    detail::subtree_sums(P, s.data());
    double best = 0.0;
    for (int g = 0; g < P.J(); ++g)
        for (std::size_t z = 0; z < P.cubes_at(g); ++z) best = std::max(best, s[P.level_offset(g) + z] / P.volume(g));
    return std::sqrt(best);
}

double bmo2_norm(const StepFunction& b, const Weight& w) { return bmo_q_norm(b, w, 2.0); }

StepFunction dyadic_maximal(const StepFunction& f) {
    const TreeParams& P = f.params();
    Eigen::VectorXd pyr = detail::pyramid_of_values(P, f.values().cwiseAbs());
    const unsigned k = P.children();
    for (int g = 0; g < P.J(); ++g) {
        const std::size_t o = P.level_offset(g), oc = P.level_offset(g + 1);
        for (std::size_t z = 0; z < P.cubes_at(g); ++z)
            for (unsigned c = 0; c < k; ++c) {
                const auto idx = static_cast<Eigen::Index>(oc + z * k + c);
                pyr[idx] = std::max(pyr[idx], pyr[static_cast<Eigen::Index>(o + z)]);
            }
    }
    return StepFunction(P, detail::from_morton(P, pyr.tail(static_cast<Eigen::Index>(P.cells()))));
}

StepFunction square_function(const StepFunction& f) { return shifted_square_function(f, 0, 0); }

StepFunction shifted_square_function(const StepFunction& f, int i, int j, ShiftedReading reading) {
    if (i < 0 || j < 0) throw InvalidArgument("shift parameters must be non-negative");
    const TreeParams& P = f.params();
    const int n = P.n();
    const unsigned ones = P.ones();
    const Eigen::VectorXd c = detail::analyze_values(P, f.values());
    std::vector<double> s(P.pyramid_size(), 0.0);
    std::vector<double> A(ones);
    for (int g = j; g <= P.J() - 1; ++g) {
        const int h = g - j + i;  // generation of the inner cubes P
        if (h > P.J() - 1) break;
        const int gr = g - j;     // generation of the common ancestor
        const double inv_vol = 1.0 / P.volume(g);
        for (std::size_t zr = 0; zr < P.cubes_at(gr); ++zr) {
            std::fill(A.begin(), A.end(), 0.0);
            for (std::size_t zp = zr << (i * n); zp < (zr + 1) << (i * n); ++zp)
                for (unsigned e = 0; e < ones; ++e)
                    A[e] += std::abs(c[static_cast<Eigen::Index>(detail::slot(P, h, zp, e))]);
            double val = 0.0;
            if (reading == ShiftedReading::per_signature) {
                for (double a : A) val += a * a;
            } else {
                double t = 0.0;
                for (double a : A) t += a;
                val = t * t;
            }
            for (std::size_t zq = zr << (j * n); zq < (zr + 1) << (j * n); ++zq)
                s[P.level_offset(g) + zq] = val * inv_vol;
        }
    }
    Eigen::VectorXd vm = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(P.cells()));
    detail::push_down_add(P, s.data(), vm.data());
    return StepFunction(P, detail::from_morton(P, vm.cwiseMax(0.0).cwiseSqrt()));
}

}  // namespace dyadic
