#include "dyadic/shift.hpp"

#include <cmath>
#include <random>

#include "dyadic/detail/coeff_ops.hpp"
#include "dyadic/detail/random.hpp"
#include "dyadic/errors.hpp"
#include "dyadic/families.hpp"
#include "dyadic/paraproducts.hpp"
#include "dyadic/weights.hpp"

namespace dyadic {

using nlohmann::json;
using Vec = Eigen::VectorXd;

ShiftData::ShiftData(const TreeParams& params, int i, int j, bool cancellative)
    : params_(params), i_(i), j_(j), cancellative_(cancellative) {
    if (i < 0 || j < 0) throw InvalidArgument("shift parameters must be non-negative");
    if (top_generation() < 0) throw DepthExceeded("shift parameters do not fit in the tree");
    sigs_ = cancellative ? params.ones() : params.children();
    block_ = (std::size_t{1} << (params.n() * (i + j))) * sigs_ * sigs_;
    coeffs_.assign(params.level_offset(top_generation() + 1) * block_, 0.0);
}

double ShiftData::bound() const { return std::pow(2.0, -0.5 * params_.n() * (i_ + j_)); }

std::size_t ShiftData::index_of(int g, std::size_t z) const {
    if (g < 0 || g > top_generation() || z >= params_.cubes_at(g)) throw InvalidArgument("R outside the shift range");
    return params_.level_offset(g) + z;
}

std::size_t ShiftData::offset(int g, std::size_t z, std::size_t p, std::size_t q, unsigned e, unsigned h) const {
    const std::size_t np = std::size_t{1} << (params_.n() * i_);
    const std::size_t nq = std::size_t{1} << (params_.n() * j_);
    if (p >= np || q >= nq || e >= sigs_ || h >= sigs_) throw InvalidArgument("shift index out of range");
    return index_of(g, z) * block_ + ((q * sigs_ + h) * np + p) * sigs_ + e;
}

double ShiftData::get(int g, std::size_t z, std::size_t p, std::size_t q, unsigned e, unsigned h) const {
    return coeffs_[offset(g, z, p, q, e, h)];
}

void ShiftData::set(int g, std::size_t z, std::size_t p, std::size_t q, unsigned e, unsigned h, double v) {
    coeffs_[offset(g, z, p, q, e, h)] = v;
}

namespace {

std::size_t local_index(const DyadicCube& R, const DyadicCube& P, int k) {
    if (P.g != R.g + k || !R.contains(P)) throw InvalidArgument("cube is not a descendant of R at the expected depth");
    const std::uint64_t zr = morton_code(R), zp = morton_code(P);
    return static_cast<std::size_t>(zp - (zr << (k * R.dim())));
}

}  // namespace

double ShiftData::get(const DyadicCube& R, const DyadicCube& P, const DyadicCube& Q, Signature e, Signature h) const {
    return get(R.g, morton_code(R), local_index(R, P, i_), local_index(R, Q, j_), e.bits, h.bits);
}

void ShiftData::set(const DyadicCube& R, const DyadicCube& P, const DyadicCube& Q, Signature e, Signature h, double v) {
    set(R.g, morton_code(R), local_index(R, P, i_), local_index(R, Q, j_), e.bits, h.bits, v);
}

void ShiftData::audit(double rel_slack) const {
    const double lim = bound() * (1.0 + rel_slack);
    for (double v : coeffs_)
        if (!(std::abs(v) <= lim)) throw BoundViolation("shift coefficient exceeds |R|^{-1} sqrt(|P||Q|)");
}

ShiftData random_shift(const TreeParams& params, int i, int j, std::uint64_t seed, bool cancellative) {
    ShiftData d(params, i, j, cancellative);
    std::mt19937_64 rng(seed);
    const double b = d.bound();
    const std::size_t np = std::size_t{1} << (params.n() * i);
    const std::size_t nq = std::size_t{1} << (params.n() * j);
    for (int g = 0; g <= d.top_generation(); ++g)
        for (std::size_t z = 0; z < params.cubes_at(g); ++z)
            for (std::size_t q = 0; q < nq; ++q)
                for (unsigned h = 0; h < d.signatures(); ++h)
                    for (std::size_t p = 0; p < np; ++p)
                        for (unsigned e = 0; e < d.signatures(); ++e) d.set(g, z, p, q, e, h, b * detail::uniform_pm1(rng));
    return d;
}

ShiftData paraproduct_as_shift(const StepFunction& b) {
    const TreeParams& p = b.params();
    const double norm = bmo2_norm(b);
    if (!(norm > 0.0)) throw InvalidArgument("paraproduct_as_shift needs a symbol with non-zero BMO norm");
    ShiftData d(p, 0, 0, false);
    const Vec c = detail::analyze_values(p, b.values());
    const unsigned ones = p.ones();
    for (int g = 0; g < p.J(); ++g) {
        const double scale = 1.0 / (std::sqrt(p.volume(g)) * norm);
        for (std::size_t z = 0; z < p.cubes_at(g); ++z)
            for (unsigned h = 0; h < ones; ++h)
                d.set(g, z, 0, 0, ones, h, c[static_cast<Eigen::Index>(detail::slot(p, g, z, h))] * scale);
    }
    d.audit(1e-12);
    return d;
}

namespace {

/// Factor multiplying a^{eh}_{PQR}; gp/zp and gq/zq are generation and Morton code of P, Q.
using PairFactor = std::function<double(int gp, std::size_t zp, int gq, std::size_t zq)>;

/// y = S x (or S* x when transpose): reads generation g+i (g+j) coefficients, writes the other.
Vec shift_apply(const ShiftData& d, const Vec& f, bool transpose, const PairFactor* factor) {
    const TreeParams& p = d.params();
    const int n = p.n();
    const unsigned ones = p.ones();
    const unsigned s = d.signatures();
    const bool nonc = !d.cancellative();
    const int di = transpose ? d.j() : d.i();  // depth of input cubes below R
    const int dout = transpose ? d.i() : d.j();
    const std::size_t nin = std::size_t{1} << (n * di);
    const std::size_t nout = std::size_t{1} << (n * dout);
    const std::size_t np = std::size_t{1} << (n * d.i());

    const detail::Analysis a = detail::analyze_full(p, f);
    Vec out = Vec::Zero(f.size());
    Vec ind;
    if (nonc) ind = Vec::Zero(static_cast<Eigen::Index>(p.pyramid_size()));

    std::vector<double> x(nin * s), y(nout * s);
    for (int g = 0; g <= d.top_generation(); ++g) {
        const int gin = g + di, gout = g + dout;
        const double sq_in = std::sqrt(p.volume(gin));
        const double sq_out = std::sqrt(p.volume(gout));
        for (std::size_t zr = 0; zr < p.cubes_at(g); ++zr) {
            const std::size_t zin0 = zr << (n * di);
            const std::size_t zout0 = zr << (n * dout);
            for (std::size_t u = 0; u < nin; ++u) {
                for (unsigned e = 0; e < ones; ++e)
                    x[u * s + e] = a.coeffs[static_cast<Eigen::Index>(detail::slot(p, gin, zin0 + u, e))];
                if (nonc) x[u * s + ones] = sq_in * a.pyr[static_cast<Eigen::Index>(p.level_offset(gin) + zin0 + u)];
            }
            std::fill(y.begin(), y.end(), 0.0);
            const double* A = d.block(g, zr);
            // A is laid out [q][h][p][e].
            for (std::size_t q = 0; q < (std::size_t{1} << (n * d.j())); ++q) {
                for (std::size_t pp = 0; pp < np; ++pp) {
                    double fac = 1.0;
                    if (factor) fac = (*factor)(g + d.i(), (zr << (n * d.i())) + pp, g + d.j(), (zr << (n * d.j())) + q);
                    if (fac == 0.0) continue;
                    for (unsigned h = 0; h < s; ++h) {
                        const double* row = A + ((q * s + h) * np + pp) * s;
                        if (!transpose) {
                            double acc = 0.0;
                            for (unsigned e = 0; e < s; ++e) acc += row[e] * x[pp * s + e];
                            y[q * s + h] += fac * acc;
                        } else {
                            const double xv = fac * x[q * s + h];
                            for (unsigned e = 0; e < s; ++e) y[pp * s + e] += row[e] * xv;
                        }
                    }
                }
            }
            for (std::size_t u = 0; u < nout; ++u) {
                for (unsigned h = 0; h < ones; ++h)
                    out[static_cast<Eigen::Index>(detail::slot(p, gout, zout0 + u, h))] += y[u * s + h];
                if (nonc) ind[static_cast<Eigen::Index>(p.level_offset(gout) + zout0 + u)] += y[u * s + ones] / sq_out;
            }
        }
    }
    return detail::synthesize_with_indicators(p, out, ind);
}

json shift_tag(const ShiftData& d) {
    return json{{"i", d.i()}, {"j", d.j()}, {"cancellative", d.cancellative()}};
}

}  // namespace

LinearOperator shift(const ShiftData& data) {
    data.audit(1e-12);
    auto d = std::make_shared<const ShiftData>(data);
    return LinearOperator(
        data.params(), [d](const Vec& f) { return shift_apply(*d, f, false, nullptr); },
        [d](const Vec& f) { return shift_apply(*d, f, true, nullptr); }, json{{"shift", shift_tag(data)}});
}

LinearOperator theta_shift_closed_form(const StepFunction& b, const ShiftData& data, int k) {
    require_same(b.params(), data.params(), "theta_shift_closed_form");
    if (!data.cancellative()) throw InvalidArgument("closed form needs a cancellative shift");
    if (k < 0) throw InvalidArgument("closed form needs k >= 0");
    if (k == 0) return shift(data);
    auto d = std::make_shared<const ShiftData>(data);
    const TreeParams p = b.params();
    auto pyr = std::make_shared<const Vec>(detail::pyramid_of_values(p, b.values()));
    auto fac = std::make_shared<const PairFactor>([p, pyr, k](int gp, std::size_t zp, int gq, std::size_t zq) {
        const double diff = (*pyr)[static_cast<Eigen::Index>(p.level_offset(gq) + zq)] -
                            (*pyr)[static_cast<Eigen::Index>(p.level_offset(gp) + zp)];
        return std::pow(diff, k);
    });
    return LinearOperator(
        p, [d, fac](const Vec& f) { return shift_apply(*d, f, false, fac.get()); },
        [d, fac](const Vec& f) { return shift_apply(*d, f, true, fac.get()); },
        json{{"theta_closed_form", {{"k", k}, {"shift", shift_tag(data)}}}});
}

LinearOperator NonCancellativeShift00::op() const {
    return add(add(shift(cancellative_part), pi(a)), pi_star(d))
        .with_descriptor(json{{"shift00", {{"a_bmo", bmo_norm(a, Weight::unit(a.params()))},
                                           {"d_bmo", bmo_norm(d, Weight::unit(d.params()))}}}});
}

NonCancellativeShift00 noncancellative_shift00(const TreeParams& params, std::uint64_t seed) {
    const Weight one = Weight::unit(params);
    StepFunction a = random_haar_symbol(params, detail::mix_seed(seed, 1));
    StepFunction d = random_haar_symbol(params, detail::mix_seed(seed, 2));
    a = a * (1.0 / bmo_norm(a, one));
    d = d * (1.0 / bmo_norm(d, one));
    return NonCancellativeShift00{random_shift(params, 0, 0, seed, true), std::move(a), std::move(d)};
}

}  // namespace dyadic
