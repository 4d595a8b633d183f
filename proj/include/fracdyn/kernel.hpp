#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracdyn/interpolation.hpp"

namespace fracdyn {

enum class KernelFamily { Constant, PowerLawRL, Exponential, Tabulated };

std::string to_string(KernelFamily family);

/// A kernel k(t, tau), t >= tau, of convolution form k(t - tau).
///
/// - Constant:    k = 1
/// - PowerLawRL:  k = (t - tau)^(alpha - 1) / Gamma(alpha), 0 < alpha < 1
/// - Exponential: k = exp(-lambda (t - tau)), lambda >= 0
/// - Tabulated:   k = g(t - tau) with g a monotone cubic through (lag, value)
///
/// Immutable after construction.
class KernelSpec {
public:
    static KernelSpec constant();
    static KernelSpec power_law(double alpha);
    static KernelSpec exponential(double lambda);
    /// `lags` strictly increasing, `values` finite. Nonpositive values are
    /// accepted here and reported by validate(); log_derivative() rejects them.
    static KernelSpec tabulated(std::vector<double> lags, std::vector<double> values);

    KernelFamily family() const { return family_; }
    double alpha() const { return alpha_; }
    double lambda() const { return lambda_; }
    /// Gamma(alpha) for PowerLawRL, 1 otherwise.
    double gamma_alpha() const { return gamma_alpha_; }
    const CubicHermite& table() const { return *table_; }

    bool is_power_law() const { return family_ == KernelFamily::PowerLawRL; }

private:
    KernelSpec() = default;

    KernelFamily family_ = KernelFamily::Constant;
    double alpha_ = 1.0;
    double lambda_ = 0.0;
    double gamma_alpha_ = 1.0;
    std::optional<CubicHermite> table_;
};

/// k(b, tau). Requires tau <= b (tau < b for PowerLawRL).
double eval_kernel(const KernelSpec& k, double b, double tau);

/// d/dtau ln k(b, tau).
double log_derivative(const KernelSpec& k, double b, double tau);

struct KernelDiagnostics {
    /// Estimate of the double integral of k^2 over [a,b]x[a,b] (kernel
    /// extended symmetrically); infinite when divergent.
    double l2_integral = 0.0;
    bool l2_finite = true;
    bool convolution_form = true;
    bool positive = true;
    /// Tabulated only: the table spans every lag in [0, b - a].
    bool covers_interval = true;
    /// Index into the table (Tabulated) or sample index of the first
    /// nonpositive value.
    std::optional<std::size_t> first_nonpositive;
};

KernelDiagnostics validate(const KernelSpec& k, double a, double b);

}  // namespace fracdyn
