#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fracdyn {

struct CheckOutcome {
    int criterion = 0;
    std::string name;
    bool passed = false;
    /// The quantity compared against `threshold` (worst case over the check).
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct VerifyOptions {
    /// Names from check_names(); empty runs every check.
    std::vector<std::string> checks;
    /// Replaces every tolerance of the selected checks.
    std::optional<double> tolerance;
    std::uint32_t seed = 20240617;
};

/// Check names in criterion order.
const std::vector<std::string>& check_names();

/// Runs the selected checks in criterion order. A check that throws is
/// reported as failed with the exception text. Throws ConfigError for an
/// unknown name.
std::vector<CheckOutcome> run_verification(const VerifyOptions& opt);

}  // namespace fracdyn
