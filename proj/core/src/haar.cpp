#include "dyadic/haar.hpp"

#include <array>
#include <cmath>
#include <mutex>

#include "dyadic/detail/kernels.hpp"
#include "dyadic/errors.hpp"

namespace dyadic {

namespace detail {

const std::vector<double>& sign_table(int n) {
    static std::array<std::vector<double>, 8> tables;
    static std::once_flag once;
    std::call_once(once, [] {
        for (int d = 1; d < 8; ++d) {
            const unsigned k = 1u << d;
            const unsigned ones = k - 1u;
            tables[d].resize(k * k);
            for (unsigned e = 0; e < k; ++e)
                for (unsigned c = 0; c < k; ++c) tables[d][e * k + c] = haar_sign(e, c, ones);
        }
    });
    if (n < 1 || n >= 8) throw InvalidArgument("dimension not supported by the sign table");
    return tables[n];
}

Eigen::VectorXd to_morton(const TreeParams& p, const Eigen::VectorXd& row_major) {
    const auto& m2c = p.morton_to_cell();
    Eigen::VectorXd out(row_major.size());
    for (Eigen::Index z = 0; z < out.size(); ++z) out[z] = row_major[m2c[z]];
    return out;
}

Eigen::VectorXd from_morton(const TreeParams& p, const Eigen::VectorXd& morton) {
    const auto& m2c = p.morton_to_cell();
    Eigen::VectorXd out(morton.size());
    for (Eigen::Index z = 0; z < out.size(); ++z) out[m2c[z]] = morton[z];
    return out;
}

void averages(const TreeParams& p, const double* vm, double* pyr) {
    const int J = p.J();
    const unsigned k = p.children();
    const double inv = 1.0 / k;
    std::copy(vm, vm + p.cells(), pyr + p.level_offset(J));
    for (int g = J - 1; g >= 0; --g) {
        const double* child = pyr + p.level_offset(g + 1);
        double* cur = pyr + p.level_offset(g);
        const std::size_t count = p.cubes_at(g);
        for (std::size_t z = 0; z < count; ++z) {
            double s = 0.0;
            for (unsigned c = 0; c < k; ++c) s += child[z * k + c];
            cur[z] = s * inv;
        }
    }
}

void coefficients_from_pyramid(const TreeParams& p, const double* pyr, double* coeffs) {
    const int n = p.n();
    const unsigned k = p.children();
    const unsigned ones = p.ones();
    const auto& sg = sign_table(n);
    coeffs[0] = pyr[0];
    for (int g = 0; g < p.J(); ++g) {
        const double* child = pyr + p.level_offset(g + 1);
        const double scale = std::sqrt(p.volume(g)) / k;
        const std::size_t count = p.cubes_at(g);
        double* out = coeffs + (std::size_t{1} << (g * n));
        for (std::size_t z = 0; z < count; ++z) {
            const double* a = child + z * k;
            for (unsigned e = 0; e < ones; ++e) {
                const double* s = sg.data() + e * k;
                double acc = 0.0;
                for (unsigned c = 0; c < k; ++c) acc += s[c] * a[c];
                out[z * ones + e] = acc * scale;
            }
        }
    }
}

void pyramid_from_coefficients(const TreeParams& p, const double* coeffs, double* pyr) {
    const int n = p.n();
    const unsigned k = p.children();
    const unsigned ones = p.ones();
    const auto& sg = sign_table(n);
    pyr[0] = coeffs[0];
    for (int g = 0; g < p.J(); ++g) {
        const double* cur = pyr + p.level_offset(g);
        double* child = pyr + p.level_offset(g + 1);
        const double scale = 1.0 / std::sqrt(p.volume(g));
        const std::size_t count = p.cubes_at(g);
        const double* in = coeffs + (std::size_t{1} << (g * n));
        for (std::size_t z = 0; z < count; ++z) {
            const double* cz = in + z * ones;
            for (unsigned c = 0; c < k; ++c) {
                double acc = 0.0;
                for (unsigned e = 0; e < ones; ++e) acc += sg[e * k + c] * cz[e];
                child[z * k + c] = cur[z] + acc * scale;
            }
        }
    }
}

void analyze(const TreeParams& p, const double* vm, double* coeffs) {
    std::vector<double> pyr(p.pyramid_size());
    averages(p, vm, pyr.data());
    coefficients_from_pyramid(p, pyr.data(), coeffs);
}

void synthesize(const TreeParams& p, const double* coeffs, double* vm) {
    std::vector<double> pyr(p.pyramid_size());
    pyramid_from_coefficients(p, coeffs, pyr.data());
    const double* last = pyr.data() + p.level_offset(p.J());
    std::copy(last, last + p.cells(), vm);
}

void push_down_add(const TreeParams& p, const double* s, double* vm) {
    std::vector<double> acc(s, s + p.pyramid_size());
    accumulate_down(p, acc.data());
    const double* last = acc.data() + p.level_offset(p.J());
    for (std::size_t z = 0; z < p.cells(); ++z) vm[z] += last[z];
}

void accumulate_down(const TreeParams& p, double* s) {
    const unsigned k = p.children();
    for (int g = 0; g < p.J(); ++g) {
        const double* cur = s + p.level_offset(g);
        double* child = s + p.level_offset(g + 1);
        const std::size_t count = p.cubes_at(g);
        for (std::size_t z = 0; z < count; ++z)
            for (unsigned c = 0; c < k; ++c) child[z * k + c] += cur[z];
    }
}

void subtree_sums(const TreeParams& p, double* s) {
    const unsigned k = p.children();
    for (int g = p.J() - 1; g >= 0; --g) {
        double* cur = s + p.level_offset(g);
        const double* child = s + p.level_offset(g + 1);
        const std::size_t count = p.cubes_at(g);
        for (std::size_t z = 0; z < count; ++z)
            for (unsigned c = 0; c < k; ++c) cur[z] += child[z * k + c];
    }
}

Eigen::VectorXd analyze_values(const TreeParams& p, const Eigen::VectorXd& row_major) {
    Eigen::VectorXd vm = to_morton(p, row_major);
    Eigen::VectorXd c(vm.size());
    analyze(p, vm.data(), c.data());
    return c;
}

Eigen::VectorXd synthesize_values(const TreeParams& p, const Eigen::VectorXd& coeffs) {
    Eigen::VectorXd vm(coeffs.size());
    synthesize(p, coeffs.data(), vm.data());
    return from_morton(p, vm);
}

Eigen::VectorXd pyramid_of_values(const TreeParams& p, const Eigen::VectorXd& row_major) {
    Eigen::VectorXd vm = to_morton(p, row_major);
    Eigen::VectorXd pyr(static_cast<Eigen::Index>(p.pyramid_size()));
    averages(p, vm.data(), pyr.data());
    return pyr;
}

}  // namespace detail

HaarExpansion::HaarExpansion(const TreeParams& params)
    : params_(params), flat_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(params.cells()))) {}

HaarExpansion::HaarExpansion(const TreeParams& params, Eigen::VectorXd flat) : params_(params), flat_(std::move(flat)) {
    if (static_cast<std::size_t>(flat_.size()) != params_.cells())
        throw InvalidArgument("Haar expansion needs exactly 2^{Jn} slots");
}

std::size_t HaarExpansion::slot(const DyadicCube& Q, Signature e) const {
    validate_cube(params_, Q);
    if (e.n != params_.n()) throw InvalidArgument("signature dimension does not match the tree");
    if (!e.cancellative()) throw InvalidArgument("only cancellative signatures carry coefficients");
    if (Q.g >= params_.J()) throw DepthExceeded("finest cells carry no Haar coefficients");
    return detail::slot(params_, Q.g, morton_code(Q), e.bits);
}

double HaarExpansion::coeff(const DyadicCube& Q, Signature e) const {
    return flat_[static_cast<Eigen::Index>(slot(Q, e))];
}

HaarExpansion HaarExpansion::with_root_average(double v) const {
    Eigen::VectorXd f = flat_;
    f[0] = v;
    return HaarExpansion(params_, std::move(f));
}

HaarExpansion HaarExpansion::with_coeff(const DyadicCube& Q, Signature e, double v) const {
    Eigen::VectorXd f = flat_;
    f[static_cast<Eigen::Index>(slot(Q, e))] = v;
    return HaarExpansion(params_, std::move(f));
}

double HaarExpansion::coeff_sum_squares() const { return flat_.tail(flat_.size() - 1).squaredNorm(); }

std::vector<HaarExpansion::Entry> HaarExpansion::entries() const {
    std::vector<Entry> out;
    out.reserve(params_.cells() - 1);
    const int n = params_.n();
    for (int g = 0; g < params_.J(); ++g) {
        for (const auto& Q : cubes_of_generation(params_, g)) {
            const std::size_t z = morton_code(Q);
            for (unsigned e = 0; e < params_.ones(); ++e)
                out.push_back(Entry{Q, Signature{e, n}, flat_[static_cast<Eigen::Index>(detail::slot(params_, g, z, e))]});
        }
    }
    return out;
}

HaarExpansion analyze(const StepFunction& f) {
    return HaarExpansion(f.params(), detail::analyze_values(f.params(), f.values()));
}

StepFunction synthesize(const HaarExpansion& e) {
    return StepFunction(e.params(), detail::synthesize_values(e.params(), e.flat()));
}

StepFunction haar_function(const TreeParams& params, const DyadicCube& Q, Signature e) {
    validate_cube(params, Q);
    if (e.n != params.n()) throw InvalidArgument("signature dimension does not match the tree");
    if (!e.cancellative()) return StepFunction::indicator(params, Q) * (1.0 / std::sqrt(Q.volume()));
    if (Q.g >= params.J()) throw DepthExceeded("cancellative Haar function needs a finer generation");
    return synthesize(HaarExpansion(params).with_coeff(Q, e, 1.0));
}

double average(const StepFunction& f, const DyadicCube& Q) {
    const TreeParams& p = f.params();
    validate_cube(p, Q);
    const auto& m2c = p.morton_to_cell();
    const int shift = (p.J() - Q.g) * p.n();
    const std::uint64_t z = morton_code(Q);
    double s = 0.0;
    for (std::uint64_t k = z << shift; k < (z + 1) << shift; ++k) s += f[m2c[k]];
    return s / static_cast<double>(std::uint64_t{1} << shift);
}

Eigen::VectorXd average_pyramid(const StepFunction& f) { return detail::pyramid_of_values(f.params(), f.values()); }

double pyramid_at(const TreeParams& params, const Eigen::VectorXd& pyr, const DyadicCube& Q) {
    validate_cube(params, Q);
    return pyr[static_cast<Eigen::Index>(params.level_offset(Q.g) + morton_code(Q))];
}

}  // namespace dyadic
