#include "dyadic/tree.hpp"

#include <cmath>
#include <sstream>

#include "dyadic/errors.hpp"

namespace dyadic {

namespace {

constexpr int kMaxBits = 26;

std::uint64_t interleave(const std::vector<std::uint32_t>& m, int g) {
    std::uint64_t z = 0;
    const int n = static_cast<int>(m.size());
    for (int t = g - 1; t >= 0; --t) {
        unsigned c = 0;
        for (int i = 0; i < n; ++i) c |= ((m[i] >> t) & 1u) << i;
        z = (z << n) | c;
    }
    return z;
}

}  // namespace

TreeParams::TreeParams(int n, int J) : n_(n), J_(J) {
    if (n < 1) throw InvalidArgument("dimension n must be at least 1");
    if (J < 1) throw InvalidArgument("depth J must be at least 1");
    if (n * J > kMaxBits) throw InvalidArgument("tree too large: n*J must not exceed 26");
    auto t = std::make_shared<Tables>();
    const std::size_t N = cells();
    t->m2c.resize(N);
    t->c2m.resize(N);
    for (std::size_t z = 0; z < N; ++z) {
        DyadicCube c = cube_from_morton(n, J, z);
        std::size_t cell = 0;
        for (int i = 0; i < n; ++i) cell = (cell << J) | c.m[i];
        t->m2c[z] = static_cast<std::uint32_t>(cell);
        t->c2m[cell] = static_cast<std::uint32_t>(z);
    }
    tables_ = std::move(t);
}

double TreeParams::cell_volume() const { return std::ldexp(1.0, -J_ * n_); }

double TreeParams::volume(int g) const { return std::ldexp(1.0, -g * n_); }

std::string TreeParams::to_string() const {
    std::ostringstream os;
    os << "(n=" << n_ << ", J=" << J_ << ")";
    return os.str();
}

void require_same(const TreeParams& a, const TreeParams& b, const char* what) {
    if (a != b) throw ParamsMismatch(std::string(what) + ": tree " + a.to_string() + " vs " + b.to_string());
}

double DyadicCube::side() const { return std::ldexp(1.0, -g); }

double DyadicCube::volume() const { return std::ldexp(1.0, -g * dim()); }

double DyadicCube::lower(int i) const { return std::ldexp(static_cast<double>(m[i]), -g); }

double DyadicCube::upper(int i) const { return std::ldexp(static_cast<double>(m[i]) + 1.0, -g); }

bool DyadicCube::contains(const DyadicCube& other) const {
    if (other.dim() != dim() || other.g < g) return false;
    const int k = other.g - g;
    for (int i = 0; i < dim(); ++i)
        if ((other.m[i] >> k) != m[i]) return false;
    return true;
}

Signature Signature::from_vector(const std::vector<int>& v) {
    Signature s{0, static_cast<int>(v.size())};
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] != 0 && v[i] != 1) throw InvalidArgument("signature entries must be 0 or 1");
        s.bits |= static_cast<unsigned>(v[i]) << i;
    }
    return s;
}

std::vector<int> Signature::to_vector() const {
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = (bits >> i) & 1u;
    return v;
}

Signature signature_add(Signature e, Signature h) {
    if (e.n != h.n) throw InvalidArgument("signature dimensions differ");
    return Signature{signature_add_bits(e.bits, h.bits, (1u << e.n) - 1u), e.n};
}

std::optional<DyadicCube> ancestor(const DyadicCube& Q, int k) {
    if (k < 0 || k > Q.g) return std::nullopt;
    DyadicCube a{Q.g - k, Q.m};
    for (auto& v : a.m) v >>= k;
    return a;
}

std::vector<DyadicCube> descendants(const TreeParams& params, const DyadicCube& Q, int k) {
    validate_cube(params, Q);
    if (k < 0) throw InvalidArgument("descendant order must be non-negative");
    if (Q.g + k > params.J()) throw DepthExceeded("descendants beyond the finest generation");
    const int n = params.n();
    const std::size_t per = std::size_t{1} << k;
    const std::size_t count = std::size_t{1} << (k * n);
    std::vector<DyadicCube> out;
    out.reserve(count);
    for (std::size_t r = 0; r < count; ++r) {
        DyadicCube d{Q.g + k, std::vector<std::uint32_t>(n)};
        std::size_t rest = r;
        for (int i = n - 1; i >= 0; --i) {
            d.m[i] = (Q.m[i] << k) | static_cast<std::uint32_t>(rest % per);
            rest /= per;
        }
        out.push_back(std::move(d));
    }
    return out;
}

std::vector<DyadicCube> cubes_of_generation(const TreeParams& params, int g) {
    return descendants(params, DyadicCube::root(params.n()), g);
}

std::uint64_t morton_code(const DyadicCube& Q) { return interleave(Q.m, Q.g); }

DyadicCube cube_from_morton(int n, int g, std::uint64_t z) {
    DyadicCube q{g, std::vector<std::uint32_t>(n, 0)};
    for (int t = 0; t < g; ++t) {
        const unsigned c = static_cast<unsigned>(z >> (t * n)) & ((1u << n) - 1u);
        for (int i = 0; i < n; ++i) q.m[i] |= ((c >> i) & 1u) << t;
    }
    return q;
}

void validate_cube(const TreeParams& params, const DyadicCube& Q) {
    if (Q.dim() != params.n()) throw InvalidArgument("cube dimension does not match the tree");
    if (Q.g < 0 || Q.g > params.J()) throw DepthExceeded("cube generation outside 0..J");
    for (auto v : Q.m)
        if (v >= (std::uint32_t{1} << Q.g)) throw InvalidArgument("cube index out of range");
}

}  // namespace dyadic
