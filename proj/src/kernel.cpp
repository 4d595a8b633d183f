#include "fracdyn/kernel.hpp"

#include <cmath>
#include <algorithm>
#include <limits>
#include <sstream>

#include "fracdyn/errors.hpp"
#include "fracdyn/quadrature.hpp"

namespace fracdyn {

std::string to_string(KernelFamily family) {
    switch (family) {
        case KernelFamily::Constant: return "constant";
        case KernelFamily::PowerLawRL: return "power_law_rl";
        case KernelFamily::Exponential: return "exponential";
        case KernelFamily::Tabulated: return "tabulated";
    }
    return "unknown";
}

KernelSpec KernelSpec::constant() { return KernelSpec(); }

KernelSpec KernelSpec::power_law(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw InvalidArgument("power-law kernel requires 0 < alpha < 1, got " + std::to_string(alpha));
    KernelSpec k;
    k.family_ = KernelFamily::PowerLawRL;
    k.alpha_ = alpha;
    k.gamma_alpha_ = std::tgamma(alpha);
    return k;
}

KernelSpec KernelSpec::exponential(double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw InvalidArgument("exponential kernel requires finite lambda >= 0, got " + std::to_string(lambda));
    KernelSpec k;
    k.family_ = KernelFamily::Exponential;
    k.lambda_ = lambda;
    return k;
}

KernelSpec KernelSpec::tabulated(std::vector<double> lags, std::vector<double> values) {
    if (!lags.empty() && lags.front() < 0.0) throw InvalidArgument("tabulated kernel lags must be >= 0");
    KernelSpec k;
    k.family_ = KernelFamily::Tabulated;
    k.table_ = CubicHermite::monotone(std::move(lags), std::move(values));
    return k;
}

namespace {

// A few ulps past b is treated as b; integrators land there through roundoff.
double checked_lag(double b, double tau) {
    if (tau > b && tau - b <= 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(b)))
        return 0.0;
    if (!(tau <= b)) {
        std::ostringstream os;
        os.precision(17);
        os << "kernel argument tau = " << tau << " exceeds b = " << b;
        throw OutOfRange(os.str());
    }
    return b - tau;
}

[[noreturn]] void singular_endpoint(double b) {
    std::ostringstream os;
    os.precision(17);
    os << "power-law kernel is singular at tau = b = " << b;
    SingularArgument e(os.str());
    e.tau = b;
    throw e;
}

}  // namespace

double eval_kernel(const KernelSpec& k, double b, double tau) {
    const double lag = checked_lag(b, tau);
    switch (k.family()) {
        case KernelFamily::Constant: return 1.0;
        case KernelFamily::PowerLawRL:
            if (lag == 0.0) singular_endpoint(b);
            return std::pow(lag, k.alpha() - 1.0) / k.gamma_alpha();
        case KernelFamily::Exponential: return std::exp(-k.lambda() * lag);
        case KernelFamily::Tabulated: return k.table().value(lag);
    }
    return 0.0;
}

double log_derivative(const KernelSpec& k, double b, double tau) {
    const double lag = checked_lag(b, tau);
    switch (k.family()) {
        case KernelFamily::Constant: return 0.0;
        case KernelFamily::PowerLawRL:
            if (lag == 0.0) singular_endpoint(b);
            return (1.0 - k.alpha()) / lag;
        case KernelFamily::Exponential: return k.lambda();
        case KernelFamily::Tabulated: {
            const double g = k.table().value(lag);
            if (!(g > 0.0)) {
                SingularArgument e("ln k undefined: tabulated kernel value " + std::to_string(g) +
                                   " is not positive");
                e.tau = tau;
                throw e;
            }
            // d/dtau g(b - tau) = -g'(lag)
            return -k.table().derivative(lag) / g;
        }
    }
    return 0.0;
}

KernelDiagnostics validate(const KernelSpec& k, double a, double b) {
    if (!(a < b)) throw InvalidArgument("validate requires a < b");
    KernelDiagnostics out;
    const double span = b - a;
    // All supported families are of convolution form k(t - tau); for those
    // the double integral reduces to 2 * int_0^span (span - d) g(d)^2 dd.
    out.convolution_form = true;
    QuadratureConfig quad;
    quad.max_nodes = std::size_t{1} << 18;
    switch (k.family()) {
        case KernelFamily::Constant: out.l2_integral = span * span; break;
        case KernelFamily::Exponential: {
            auto integrand = [&](double d) { return (span - d) * std::exp(-2.0 * k.lambda() * d); };
            out.l2_integral = 2.0 * integrate(integrand, 0.0, span, quad).value;
            break;
        }
        case KernelFamily::PowerLawRL: {
            const double beta = 2.0 * k.alpha() - 1.0;
            if (beta <= 0.0) {
                out.l2_finite = false;
                out.l2_integral = std::numeric_limits<double>::infinity();
                break;
            }
            // u = d^beta makes d^(2 alpha - 2) dd = du / beta.
            auto integrand = [&](double u) { return span - std::pow(u, 1.0 / beta); };
            const double g2 = k.gamma_alpha() * k.gamma_alpha();
            out.l2_integral = 2.0 / (beta * g2) * integrate(integrand, 0.0, std::pow(span, beta), quad).value;
            break;
        }
        case KernelFamily::Tabulated: {
            const auto& t = k.table();
            if (t.front() > 0.0 || t.back() < span) {
                out.covers_interval = false;
                out.l2_integral = std::numeric_limits<double>::quiet_NaN();
                out.l2_finite = false;
            } else {
                auto integrand = [&](double d) {
                    const double g = t.value(d);
                    return (span - d) * g * g;
                };
                out.l2_integral = 2.0 * integrate(integrand, 0.0, span, quad).value;
            }
            const auto values = t.ordinates();
            for (std::size_t i = 0; i < values.size(); ++i) {
                if (!(values[i] > 0.0)) {
                    out.positive = false;
                    out.first_nonpositive = i;
                    break;
                }
            }
            break;
        }
    }
    return out;
}

}  // namespace fracdyn
