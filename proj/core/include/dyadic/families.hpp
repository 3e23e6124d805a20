#pragma once

#include <cstdint>
#include <optional>

#include "dyadic/weights.hpp"

namespace dyadic {

/// Cell averages of x_1^a ... x_n^a, -1 < a < 1.
Weight power_weight(double alpha, const TreeParams& params);

/// Dyadic martingale weight: each cube passes its value to its children times 1 +- delta,
/// half of the children up and half down, so cube averages are preserved.
/// Draws are made level by level, so the coarse levels do not depend on J.
Weight cascade_weight(const TreeParams& params, double delta, std::uint64_t seed);

/// Cell values exp(spread * u) with u uniform in [-1,1].
Weight random_weight(const TreeParams& params, std::uint64_t seed, double spread = 1.0);

/// Cell averages of log(1/x_1) + ... + log(1/x_n), rescaled to unit dyadic BMO^2 norm.
/// With mean_zero the root average is removed afterwards.
StepFunction log_symbol(const TreeParams& params, bool mean_zero = false);

/// Haar coefficients u |Q|^{1/2} with u uniform in [-1,1] and zero root average.
StepFunction random_haar_symbol(const TreeParams& params, std::uint64_t seed);

/// Cell values uniform in [-1,1].
StepFunction random_step_function(const TreeParams& params, std::uint64_t seed);

/// Target normalization of a random symbol.
struct SymbolTarget {
    enum class Kind { unweighted, bloom } kind = Kind::unweighted;
    std::optional<Weight> nu;

    static SymbolTarget unweighted(std::optional<Weight> report_nu = std::nullopt) {
        return SymbolTarget{Kind::unweighted, std::move(report_nu)};
    }
    static SymbolTarget bloom(Weight nu) { return SymbolTarget{Kind::bloom, std::move(nu)}; }
};

struct RandomSymbol {
    StepFunction b;
    double bmo2;     ///< ||b||_{BMO^2_D}
    double bmo2_nu;  ///< ||b||_{BMO^2_D(nu)}, NaN when no nu was given
};

/// random_haar_symbol rescaled so the target norm equals one.
RandomSymbol random_bmo_symbol(std::uint64_t seed, const TreeParams& params, const SymbolTarget& target);

}  // namespace dyadic
