#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace dyadic {

struct IdentityResult {
    std::string name;
    std::string group;  ///< dyadic_core, weighted_spaces or operator_algebra
    int checks = 0;
    double max_residual = 0.0;
    bool passed = true;
    nlohmann::json to_json() const;
};

struct SuiteOptions {
    std::vector<int> dims{1, 2};
    std::vector<int> depths{3, 4, 5, 6};
    int trials = 100;
    std::uint64_t seed = 0;
    double tol = 1e-9;
    /// Run only identities whose name contains this text.
    std::optional<std::string> filter;
};

struct IdentityReport {
    SuiteOptions options;
    std::vector<IdentityResult> results;
    bool passed() const;
    nlohmann::json to_json() const;
    /// One line per identity.
    std::string to_text() const;
};

/// Names of all identities, in run order.
std::vector<std::string> identity_names();

/// Checks the algebraic identities and invariants over every (n, J, trial).
///
/// Residuals are ||lhs - rhs|| / max(||f||, ||lhs||, ||rhs||) for operator identities and
/// counts of violations for inequalities. Identities needing exhaustive enumeration run
/// once per (n, J) and only on the depths where they are affordable.
IdentityReport identity_suite(const SuiteOptions& options);

}  // namespace dyadic
