#pragma once

#include <cstddef>
#include <functional>
#include <string>

namespace fracdyn {

enum class QuadratureRule { Trapezoid, GaussLegendre, Adaptive };

std::string to_string(QuadratureRule rule);

struct QuadratureConfig {
    QuadratureRule rule = QuadratureRule::Adaptive;
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    std::size_t max_nodes = std::size_t{1} << 16;

    /// Same rule and budget with both tolerances divided by `factor`.
    QuadratureConfig tightened(double factor) const;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t nodes = 0;
};

using Integrand = std::function<double(double)>;

/// Integral of f over [lo, hi] with the configured rule:
/// - Trapezoid: composite rule with panel doubling, Richardson error estimate.
/// - GaussLegendre: composite 10-point rule with panel doubling.
/// - Adaptive: globally adaptive Gauss-Kronrod 7/15.
/// Throws QuadratureFailure when max(abs_tol, rel_tol*|I|) is not met
/// within max_nodes integrand evaluations.
QuadratureResult integrate(const Integrand& f, double lo, double hi, const QuadratureConfig& cfg);

}  // namespace fracdyn
