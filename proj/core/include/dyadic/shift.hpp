#pragma once

#include <cstdint>
#include <vector>

#include "dyadic/operator.hpp"

namespace dyadic {

/// Coefficients a^{eh}_{PQR} of a dyadic shift with parameters (i, j).
///
/// R runs over generations 0..J-1-max(i,j); P over the 2^{in} cubes of R_(i) and Q over the
/// 2^{jn} cubes of R_(j), both in Morton order relative to R. Cancellative shifts store only
/// cancellative signatures; otherwise the all-ones signature is included as the last index.
class ShiftData {
public:
    ShiftData(const TreeParams& params, int i, int j, bool cancellative);

    const TreeParams& params() const { return params_; }
    int i() const { return i_; }
    int j() const { return j_; }
    bool cancellative() const { return cancellative_; }
    /// Highest generation of R that keeps P and Q inside the coefficient range.
    int top_generation() const { return params_.J() - 1 - std::max(i_, j_); }
    /// Number of signatures stored per cube.
    unsigned signatures() const { return sigs_; }
    std::size_t block_size() const { return block_; }
    /// Largest admissible magnitude |R|^{-1} sqrt(|P||Q|) = 2^{-n(i+j)/2}.
    double bound() const;

    /// Entry for R (generation g, Morton z), local indices p, q and signatures e, h.
    double get(int g, std::size_t z, std::size_t p, std::size_t q, unsigned e, unsigned h) const;
    void set(int g, std::size_t z, std::size_t p, std::size_t q, unsigned e, unsigned h, double v);
    /// Same by cubes; P and Q must be the i-th and j-th descendants of R.
    double get(const DyadicCube& R, const DyadicCube& P, const DyadicCube& Q, Signature e, Signature h) const;
    void set(const DyadicCube& R, const DyadicCube& P, const DyadicCube& Q, Signature e, Signature h, double v);

    /// Block of coefficients of one R, laid out [q][h][p][e].
    const double* block(int g, std::size_t z) const { return coeffs_.data() + index_of(g, z) * block_; }
    const std::vector<double>& raw() const { return coeffs_; }

    /// Throws BoundViolation when an entry exceeds bound() (up to rel_slack) or a
    /// cancellative shift has a non-zero non-cancellative entry.
    void audit(double rel_slack = 0.0) const;

private:
    std::size_t index_of(int g, std::size_t z) const;
    std::size_t offset(int g, std::size_t z, std::size_t p, std::size_t q, unsigned e, unsigned h) const;

    TreeParams params_;
    int i_, j_;
    bool cancellative_;
    unsigned sigs_;
    std::size_t block_;
    std::vector<double> coeffs_;
};

/// Random coefficients uniform in [-1,1] times bound(); deterministic per seed.
ShiftData random_shift(const TreeParams& params, int i, int j, std::uint64_t seed, bool cancellative = true);

/// Coefficients with ||b||_{BMO^2_D} * shift(data) = Pi_b.
ShiftData paraproduct_as_shift(const StepFunction& b);

LinearOperator shift(const ShiftData& data);

/// Direct evaluation of sum a f(P,e) (<b>_Q - <b>_P)^k h_Q^h for a cancellative shift.
LinearOperator theta_shift_closed_form(const StepFunction& b, const ShiftData& data, int k);

/// S_c + Pi_a + Pi*_d with a cancellative (0,0) shift and symbols of unit dyadic BMO norm.
struct NonCancellativeShift00 {
    ShiftData cancellative_part;
    StepFunction a;
    StepFunction d;

    LinearOperator op() const;
};

NonCancellativeShift00 noncancellative_shift00(const TreeParams& params, std::uint64_t seed);

}  // namespace dyadic
