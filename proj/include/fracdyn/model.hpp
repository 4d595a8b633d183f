#pragma once

#include <optional>
#include <vector>

#include "fracdyn/interpolation.hpp"
#include "fracdyn/kernel.hpp"
#include "fracdyn/trajectory.hpp"

namespace fracdyn {

/// A time-dependent coefficient r(tau) or s(tau).
class CoefficientModel {
public:
    enum class Kind { Constant, Polynomial, Tabulated };

    static CoefficientModel constant(double c);
    /// c0 + c1 tau + c2 tau^2 + ...
    static CoefficientModel polynomial(std::vector<double> coeffs);
    /// Natural cubic spline through the samples (C2 on the grid span).
    static CoefficientModel tabulated(std::vector<double> grid, std::vector<double> values);

    Kind kind() const { return kind_; }
    double value(double tau) const;
    double derivative(double tau) const;

    /// True when value() does not depend on tau.
    bool is_constant() const;
    /// Value of a constant model; throws InvalidArgument otherwise.
    double constant_value() const;

private:
    CoefficientModel() = default;

    Kind kind_ = Kind::Constant;
    std::vector<double> coeffs_;
    std::optional<CubicHermite> spline_;
};

struct PhaseState {
    double tau = 0.0;
    double x = 0.0;
    double xdot = 0.0;
};

struct CanonicalState {
    double tau = 0.0;
    double x = 0.0;
    double momentum = 0.0;
};

struct LagrangianPartials {
    double dL_dx = 0.0;
    double dL_dxdot = 0.0;
};

/// Second derivatives of L in (x, xdot).
struct LagrangianHessian {
    double xx = 0.0;
    double x_xdot = 0.0;
    double xdot_xdot = 0.0;
};

/// A Lagrangian L(tau, x, xdot) with its first partials.
class Lagrangian {
public:
    virtual ~Lagrangian() = default;
    virtual double value(const PhaseState& st) const = 0;
    virtual LagrangianPartials partials(const PhaseState& st) const = 0;
};

/// L = 1 / (r(tau) xdot + s(tau) x).
class NonstandardLagrangian final : public Lagrangian {
public:
    static constexpr double kDefaultEpsilon = 1e-12;

    NonstandardLagrangian(CoefficientModel r, CoefficientModel s, double epsilon = kDefaultEpsilon);

    const CoefficientModel& r() const { return r_; }
    const CoefficientModel& s() const { return s_; }
    double epsilon() const { return epsilon_; }

    /// w = r xdot + s x, unchecked.
    double denominator(const PhaseState& st) const;

    /// 1/w. Every evaluator below throws SingularDenominator when |w| < epsilon.
    double value(const PhaseState& st) const override;
    /// (-s/w^2, -r/w^2)
    LagrangianPartials partials(const PhaseState& st) const override;
    LagrangianHessian hessian(const PhaseState& st) const;

    /// Canonical momentum -r/w^2.
    double momentum(const PhaseState& st) const;

    /// H = -s x p / r, the compact Hamiltonian form used for the Hamilton
    /// equations. Throws ZeroCoefficient when r(tau) = 0.
    double hamiltonian(const CanonicalState& st) const;

    /// Full Legendre transform p xdot - L with p = momentum(st).
    double legendre_hamiltonian(const PhaseState& st) const;

private:
    double checked_denominator(const PhaseState& st) const;

    CoefficientModel r_;
    CoefficientModel s_;
    double epsilon_;
};

/// Throws SingularDenominator at the first sample with |w| < epsilon, or at
/// the linearly interpolated crossing where w first changes sign.
void require_nonsingular(const NonstandardLagrangian& lag, const Trajectory& traj);

/// dL/dx - d/dtau(dL/dxdot) - (kdot/k) dL/dxdot at grid node `index`, with
/// the tau-derivative from a three-point stencil on the trajectory grid.
/// The kernel enters through log_derivative(k, b, tau). Throws EdgeOfGrid
/// at the first and last node.
double generic_el_residual(const Lagrangian& L, const KernelSpec& k, double b, const Trajectory& traj,
                           std::size_t index);

/// Same, at the grid node equal to tau (relative match 1e-12 of the span).
double generic_el_residual(const Lagrangian& L, const KernelSpec& k, double b, const Trajectory& traj,
                           double tau);

/// Three-point derivative of samples y at interior node i of a possibly
/// non-uniform grid.
double central_difference(const std::vector<double>& grid, const std::vector<double>& y, std::size_t i);

}  // namespace fracdyn
