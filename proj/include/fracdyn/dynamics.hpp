#pragma once

#include <string>
#include <vector>

#include "fracdyn/integrator.hpp"
#include "fracdyn/kernel.hpp"
#include "fracdyn/model.hpp"
#include "fracdyn/trajectory.hpp"

namespace fracdyn {

struct Interval {
    double a = 0.0;
    double b = 1.0;
};

/// Friction and spring coefficients of xddot + A xdot + B x = 0 at one time.
struct EquationCoefficients {
    double tau = 0.0;
    double A = 0.0;
    double B = 0.0;
    double log_derivative = 0.0;  ///< kdot/k at (b, tau)
};

/// A(tau) = [3s/r + rdot/r - kdot/k] / 2,
/// B(tau) = s^2/(2r^2) - rdot s/(2r^2) + sdot/r - (s/(2r)) kdot/k.
/// Throws ZeroCoefficient when r(tau) = 0.
EquationCoefficients coefficients_AB(const NonstandardLagrangian& lag, const KernelSpec& k, double b, double tau);

/// xddot = -(A xdot + B x) for the Euler-Lagrange equation of 1/(r xdot + s x).
double eom_rhs_general(const NonstandardLagrangian& lag, const KernelSpec& k, double b, const PhaseState& st);

/// Constant-coefficient case; bitwise equal to eom_rhs_general with
/// constant r and s.
double eom_rhs_constant(double r, double s, const KernelSpec& k, double b, const PhaseState& st);

struct HamiltonRates {
    double xdot = 0.0;
    double pdot = 0.0;
};

/// xdot = -s x / r,  pdot = (s/r - kdot/k) p.
HamiltonRates hamilton_rhs_literal(double r, double s, const KernelSpec& k, double b, const CanonicalState& st);

/// Default truncation of power-law runs: delta = 1e-3 (b - a).
inline constexpr double kDefaultGuardFraction = 1e-3;

/// Last time the equations are integrated to: b, or b - guard*(b - a) for
/// the power-law kernel whose kdot/k diverges at b.
double integration_end(const KernelSpec& k, const Interval& iv, double guard_fraction = kDefaultGuardFraction);

/// Integrates the Euler-Lagrange equation from (x0, v0) at iv.a. The kernel
/// is anchored at iv.b; the guard is recorded in the provenance.
Trajectory simulate_euler_lagrange(const NonstandardLagrangian& lag, const KernelSpec& k, const Interval& iv,
                                   double x0, double v0, const StepPolicy& policy,
                                   double guard_fraction = kDefaultGuardFraction);

/// Integrates the literal Hamilton system from (x0, p0). Fills the p and H
/// channels; xdot is the Hamilton rate -s x / r.
Trajectory simulate_hamilton(double r, double s, const KernelSpec& k, const Interval& iv, double x0, double p0,
                             const StepPolicy& policy, double guard_fraction = kDefaultGuardFraction);

/// Fills p = -r/w^2 and H = -s x p / r along an Euler-Lagrange trajectory.
/// Throws SingularDenominator at the first sample with |w| < epsilon.
void attach_canonical(Trajectory& traj, const NonstandardLagrangian& lag);

enum class DampingTag { ClassicalLimit, Damped, NonPhysical, MixedOverInterval };

std::string to_string(DampingTag tag);

struct DampingClass {
    DampingTag tag = DampingTag::MixedOverInterval;
    std::vector<EquationCoefficients> samples;

    double min_A() const;
    double min_B() const;
};

/// Samples A and B at the cell centres of a uniform `samples`-cell grid on
/// [a, b] (so neither endpoint is evaluated) and classifies:
/// ClassicalLimit if kdot/k == 0 everywhere; else NonPhysical if B < 0
/// somewhere; else Damped if A > 0 and B > 0 everywhere; else
/// MixedOverInterval.
DampingClass classify_damping(const CoefficientModel& r, const CoefficientModel& s, const KernelSpec& k,
                              const Interval& iv, std::size_t samples = 512);

struct SecantConfig {
    double tol = 1e-8;
    std::size_t max_iters = 50;
};

struct ShootResult {
    Trajectory trajectory;
    double slope = 0.0;
    std::size_t iterations = 0;
    /// |x(end) - x_b| of the returned trajectory.
    double miss = 0.0;
    /// w = r xdot + s x vanishes somewhere along the solution (the ODE is
    /// fine there but the Lagrangian is not).
    bool lagrangian_singular = false;
};

/// Finds the initial slope that carries x(a) = x_a to x(end) = x_b, where
/// end = integration_end(k, iv, guard). Throws NoConvergence.
ShootResult shoot_bvp(const NonstandardLagrangian& lag, const KernelSpec& k, const Interval& iv, double x_a,
                      double x_b, const StepPolicy& policy, const SecantConfig& solver = {},
                      double guard_fraction = kDefaultGuardFraction);

struct ResidualProfile {
    std::vector<double> tau;
    std::vector<double> momentum;
    std::vector<double> residual;

    double max_abs() const;
};

/// p = -r/w^2 along an Euler-Lagrange trajectory, differentiated on the
/// grid; returns pdot - (s/r - kdot/k) p at every interior node.
ResidualProfile momentum_consistency_residual(const Trajectory& traj, double r, double s, const KernelSpec& k,
                                              double b);

/// Max |xddot - eom_rhs_constant| for x = x0 exp(-(s/r)(tau - a)) on
/// `samples` points of [a, integration_end].
double hamilton_x_mode_check(double r, double s, const KernelSpec& k, const Interval& iv, double x0 = 1.0,
                             std::size_t samples = 1001, double guard_fraction = kDefaultGuardFraction);

}  // namespace fracdyn
