#pragma once

#include <span>
#include <string>
#include <vector>

#include "fracdyn/kernel.hpp"
#include "fracdyn/model.hpp"
#include "fracdyn/quadrature.hpp"
#include "fracdyn/trajectory.hpp"

namespace fracdyn {

/// Uniform grid a = tau_0 < ... < tau_N = b with fixed endpoint values and
/// free interior values x_1..x_{N-1}.
class DiscreteTrajectory {
public:
    /// `interior` must hold N - 1 values; N >= 4.
    DiscreteTrajectory(double a, double b, double x_a, double x_b, std::vector<double> interior);

    /// Samples f at the N + 1 nodes; the endpoints become f(a) and f(b).
    template <class F>
    static DiscreteTrajectory sample(double a, double b, std::size_t N, F&& f) {
        std::vector<double> interior(N > 0 ? N - 1 : 0);
        const double h = (b - a) / static_cast<double>(N);
        for (std::size_t i = 1; i < N; ++i) interior[i - 1] = f(a + static_cast<double>(i) * h);
        return DiscreteTrajectory(a, b, f(a), f(b), std::move(interior));
    }

    double a() const { return a_; }
    double b() const { return b_; }
    std::size_t cells() const { return values_.size() - 1; }
    double h() const { return (b_ - a_) / static_cast<double>(cells()); }
    double node(std::size_t i) const;
    /// All N + 1 values including the fixed endpoints.
    std::span<const double> values() const { return values_; }
    std::span<const double> interior() const { return std::span<const double>(values_).subspan(1, cells() - 1); }

    /// Replaces x_1..x_{N-1}; endpoints are untouched.
    void set_interior(std::span<const double> interior);

private:
    double a_;
    double b_;
    std::vector<double> values_;
};

struct ActionValue {
    double value = 0.0;
    std::string rule;
    std::size_t nodes = 0;
    double error_estimate = 0.0;
};

/// int_a^end k(b, tau) L(tau, x, xdot) dtau along a continuous trajectory,
/// interpolated as a cubic Hermite curve through (x, xdot). Throws
/// SingularDenominator when w vanishes or changes sign along the samples.
ActionValue evaluate_action(const NonstandardLagrangian& lag, const KernelSpec& k, double b, const Trajectory& traj,
                            const QuadratureConfig& quad);

/// Midpoint discretization sum_i W_i L(tau_{i+1/2}, (x_i + x_{i+1})/2, (x_{i+1} - x_i)/h)
/// with W_i = h k(b, tau_{i+1/2}), or the exact cell integral of the kernel
/// for the power-law family. The kernel is anchored at dtraj.b().
ActionValue evaluate_action(const NonstandardLagrangian& lag, const KernelSpec& k, const DiscreteTrajectory& dtraj);

/// Kernel weight of each cell of the discretization.
std::vector<double> cell_weights(const KernelSpec& k, const DiscreteTrajectory& dtraj);

/// Gradient of the discrete action with respect to x_1..x_{N-1}.
std::vector<double> discrete_action_gradient(const NonstandardLagrangian& lag, const KernelSpec& k,
                                             const DiscreteTrajectory& dtraj);

struct DescentConfig {
    std::size_t max_iters = 100;
    double grad_tol = 1e-8;
    std::size_t max_backtracks = 40;
};

struct StationarizeResult {
    DiscreteTrajectory trajectory;
    /// Max-norm of the gradient at `trajectory`.
    double grad_norm = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    /// Empty on success, otherwise the NoConvergence reason.
    std::string report;
};

/// Damped Newton iteration on the gradient (tridiagonal Hessian, backtracking
/// on the gradient norm) until max |grad| < grad_tol. Steps that would flip
/// the sign of any cell's w are rejected. Throws SingularDenominator when the
/// seed itself is singular.
StationarizeResult stationarize(const NonstandardLagrangian& lag, const KernelSpec& k,
                                const DiscreteTrajectory& seed, const DescentConfig& opt = {});

}  // namespace fracdyn
