#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dyadic {

/// Shape of the finite dyadic tree on [0,1)^n: dimension n and finest generation J.
///
/// Copies share one set of index tables, so passing TreeParams by value is cheap.
class TreeParams {
public:
    TreeParams(int n, int J);

    int n() const { return n_; }
    int J() const { return J_; }

    /// Number of finest cells, 2^{Jn}.
    std::size_t cells() const { return std::size_t{1} << (J_ * n_); }
    /// Number of cubes of generation g, 2^{gn}.
    std::size_t cubes_at(int g) const { return std::size_t{1} << (g * n_); }
    /// 2^n, the number of children of a cube.
    unsigned children() const { return 1u << n_; }
    /// Mask of the non-cancellative signature (all ones).
    unsigned ones() const { return (1u << n_) - 1u; }
    /// Number of cancellative signatures, 2^n - 1.
    unsigned cancellative_count() const { return ones(); }

    double cell_volume() const;
    double volume(int g) const;

    /// Offset of generation g in a pyramid (one value per cube, generations 0..J).
    std::size_t level_offset(int g) const { return ((std::size_t{1} << (g * n_)) - 1) / ones(); }
    std::size_t pyramid_size() const { return level_offset(J_ + 1); }

    /// Row-major cell index of the finest cell with Morton code z, and the inverse.
    const std::vector<std::uint32_t>& morton_to_cell() const { return tables_->m2c; }
    const std::vector<std::uint32_t>& cell_to_morton() const { return tables_->c2m; }

    std::string to_string() const;

    friend bool operator==(const TreeParams& a, const TreeParams& b) { return a.n_ == b.n_ && a.J_ == b.J_; }
    friend bool operator!=(const TreeParams& a, const TreeParams& b) { return !(a == b); }

private:
    struct Tables {
        std::vector<std::uint32_t> m2c;
        std::vector<std::uint32_t> c2m;
    };
    int n_;
    int J_;
    std::shared_ptr<const Tables> tables_;
};

/// Throws ParamsMismatch unless a == b.
void require_same(const TreeParams& a, const TreeParams& b, const char* what);

/// A cube of the tree: generation g and index vector m with 0 <= m_i < 2^g.
struct DyadicCube {
    int g = 0;
    std::vector<std::uint32_t> m;

    static DyadicCube root(int n) { return DyadicCube{0, std::vector<std::uint32_t>(n, 0)}; }

    int dim() const { return static_cast<int>(m.size()); }
    double side() const;
    double volume() const;
    /// Lower corner and upper corner in coordinate i.
    double lower(int i) const;
    double upper(int i) const;
    bool contains(const DyadicCube& other) const;

    friend bool operator==(const DyadicCube& a, const DyadicCube& b) { return a.g == b.g && a.m == b.m; }
    friend bool operator!=(const DyadicCube& a, const DyadicCube& b) { return !(a == b); }
};

/// n-bit signature; bit i is the factor in coordinate i (0 oscillating, 1 flat).
struct Signature {
    unsigned bits = 0;
    int n = 1;

    static Signature ones(int n) { return Signature{(1u << n) - 1u, n}; }
    static Signature from_vector(const std::vector<int>& v);
    std::vector<int> to_vector() const;
    bool cancellative() const { return bits != (1u << n) - 1u; }

    friend bool operator==(const Signature& a, const Signature& b) { return a.bits == b.bits && a.n == b.n; }
};

/// (e+h)_i = 1 when e_i == h_i and 0 otherwise.
Signature signature_add(Signature e, Signature h);

inline unsigned signature_add_bits(unsigned e, unsigned h, unsigned ones) { return ~(e ^ h) & ones; }

/// Sign of h_Q^e on child c of Q, in units of |Q|^{-1/2}.
inline double haar_sign(unsigned e, unsigned c, unsigned ones) {
    return (__builtin_popcount(c & ~e & ones) & 1u) ? -1.0 : 1.0;
}

/// The k-th ancestor of Q, or nothing when k exceeds the generation of Q.
std::optional<DyadicCube> ancestor(const DyadicCube& Q, int k);

/// The 2^{kn} cubes of generation g+k inside Q, in row-major order of their index vectors.
std::vector<DyadicCube> descendants(const TreeParams& params, const DyadicCube& Q, int k);

/// All cubes of generation g, in row-major order.
std::vector<DyadicCube> cubes_of_generation(const TreeParams& params, int g);

/// Morton (Z-order) code of a cube within its generation.
std::uint64_t morton_code(const DyadicCube& Q);
DyadicCube cube_from_morton(int n, int g, std::uint64_t z);

/// Checks that Q lies in the tree described by params.
void validate_cube(const TreeParams& params, const DyadicCube& Q);

}  // namespace dyadic
