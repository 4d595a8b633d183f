#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "fracdyn/interpolation.hpp"
#include "fracdyn/kernel.hpp"
#include "fracdyn/quadrature.hpp"

namespace fracdyn {

/// P = <a, t, b, p, q> for the generalized operator. p_weight and q_weight
/// are the real weights on the left and right integrals.
struct OperatorParams {
    double a = 0.0;
    double t = 0.0;
    double b = 1.0;
    double p_weight = 1.0;
    double q_weight = 0.0;

    /// Throws InvalidArgument unless a <= t <= b and all entries are finite.
    void check() const;
    /// <a, t, b, q, p>
    OperatorParams conjugate() const { return {a, t, b, q_weight, p_weight}; }
    OperatorParams at(double new_t) const { return {a, new_t, b, p_weight, q_weight}; }

    friend bool operator==(const OperatorParams&, const OperatorParams&) = default;
};

enum class Interpolation { Linear, MonotoneCubic, CubicSpline };

/// A real function of time: either a callable or samples with a fixed
/// interpolation rule.
class SampledFunction {
public:
    static SampledFunction from_callable(std::function<double(double)> fn);
    static SampledFunction from_samples(std::vector<double> grid, std::vector<double> values,
                                        Interpolation rule);

    double operator()(double tau) const { return fn_(tau); }

private:
    explicit SampledFunction(std::function<double(double)> fn) : fn_(std::move(fn)) {}
    std::function<double(double)> fn_;
};

/// int_lo^hi k(t, tau) f(tau) dtau with hi <= t. The power-law kernel is
/// integrated in u = (t - tau)^alpha, where the integrand is bounded.
QuadratureResult integrate_left_of(const KernelSpec& k, double t, const Integrand& f, double lo, double hi,
                                   const QuadratureConfig& quad);

/// int_lo^hi k(tau, t) f(tau) dtau with lo >= t, with u = (tau - t)^alpha
/// for the power-law kernel.
QuadratureResult integrate_right_of(const KernelSpec& k, double t, const Integrand& f, double lo,
                                    double hi, const QuadratureConfig& quad);

/// p * int_a^t k(t,tau) l(tau) dtau + q * int_t^b k(tau,t) l(tau) dtau
double apply_generalized(const OperatorParams& P, const KernelSpec& k, const SampledFunction& l,
                         const QuadratureConfig& quad);

/// Left Riemann-Liouville integral of order alpha in (0, 1] at time t.
double riemann_liouville(double alpha, double a, const SampledFunction& f, double t,
                         const QuadratureConfig& quad);

struct IbpResult {
    double lhs = 0.0;
    double rhs = 0.0;
    /// |lhs - rhs| / (1 + |lhs|)
    double residual = 0.0;

    bool verified(double tol) const { return residual < tol; }
};

/// Both sides of  int_a^b m S_P[l] dt = int_a^b l S_{conj P}[m] dt.
/// P.t is ignored (it is the outer integration variable). The inner
/// operator runs at 10x tighter tolerance than the outer integral.
IbpResult ibp_residual(const OperatorParams& P, const KernelSpec& k, const SampledFunction& l,
                       const SampledFunction& m, const QuadratureConfig& quad);

}  // namespace fracdyn
