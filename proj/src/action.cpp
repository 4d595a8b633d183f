#include "fracdyn/action.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracdyn/errors.hpp"
#include "fracdyn/interpolation.hpp"
#include "fracdyn/operators.hpp"

namespace fracdyn {

DiscreteTrajectory::DiscreteTrajectory(double a, double b, double x_a, double x_b, std::vector<double> interior)
    : a_(a), b_(b) {
    if (!(a < b)) throw InvalidArgument("discrete trajectory needs a < b");
    if (interior.size() < 3) throw InvalidArgument("discrete trajectory needs N >= 4 cells");
    values_.reserve(interior.size() + 2);
    values_.push_back(x_a);
    values_.insert(values_.end(), interior.begin(), interior.end());
    values_.push_back(x_b);
}

double DiscreteTrajectory::node(std::size_t i) const {
    if (i == cells()) return b_;
    return a_ + static_cast<double>(i) * h();
}

void DiscreteTrajectory::set_interior(std::span<const double> interior) {
    if (interior.size() != cells() - 1) throw InvalidArgument("interior update has the wrong length");
    std::copy(interior.begin(), interior.end(), values_.begin() + 1);
}

namespace {

PhaseState cell_state(const DiscreteTrajectory& d, std::size_t i) {
    const auto x = d.values();
    const double h = d.h();
    const double tau = d.a() + (static_cast<double>(i) + 0.5) * h;
    return {tau, 0.5 * (x[i] + x[i + 1]), (x[i + 1] - x[i]) / h};
}

// Every cell's w must have the sign of the first cell's; a flip means the
// piecewise-linear path crosses the singular set.
void check_single_basin(const NonstandardLagrangian& lag, const DiscreteTrajectory& d) {
    double sign = 0.0;
    for (std::size_t i = 0; i < d.cells(); ++i) {
        const PhaseState st = cell_state(d, i);
        const double w = lag.denominator(st);
        if (!(std::abs(w) >= lag.epsilon())) throw SingularDenominator(st.tau, w);
        if (sign == 0.0) sign = w > 0.0 ? 1.0 : -1.0;
        if (w * sign < 0.0) throw SingularDenominator(st.tau, 0.0);
    }
}

bool same_basin(const NonstandardLagrangian& lag, const DiscreteTrajectory& d, double sign) {
    for (std::size_t i = 0; i < d.cells(); ++i) {
        const double w = lag.denominator(cell_state(d, i));
        if (!(w * sign >= lag.epsilon())) return false;
    }
    return true;
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

ActionValue evaluate_action(const NonstandardLagrangian& lag, const KernelSpec& k, double b, const Trajectory& traj,
                            const QuadratureConfig& quad) {
    traj.check();
    if (traj.size() < 2) throw InvalidArgument("action needs at least two trajectory samples");
    if (traj.back() > b) throw InvalidArgument("trajectory extends past the kernel anchor b");
    require_nonsingular(lag, traj);
    const CubicHermite curve = CubicHermite::from_slopes(traj.grid, traj.x, traj.xdot);
    const Integrand integrand = [&](double tau) {
        return lag.value(PhaseState{tau, curve.value(tau), curve.derivative(tau)});
    };
    const QuadratureResult r = integrate_left_of(k, b, integrand, traj.front(), traj.back(), quad);
    return {r.value, to_string(quad.rule), r.nodes, r.error};
}

std::vector<double> cell_weights(const KernelSpec& k, const DiscreteTrajectory& d) {
    const std::size_t n = d.cells();
    const double b = d.b();
    const double h = d.h();
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (k.is_power_law()) {
            const double alpha = k.alpha();
            const double lo = b - d.node(i);
            const double hi = b - d.node(i + 1);
            w[i] = (std::pow(lo, alpha) - std::pow(hi, alpha)) / (alpha * k.gamma_alpha());
        } else {
            w[i] = h * eval_kernel(k, b, d.a() + (static_cast<double>(i) + 0.5) * h);
        }
    }
    return w;
}

ActionValue evaluate_action(const NonstandardLagrangian& lag, const KernelSpec& k, const DiscreteTrajectory& d) {
    check_single_basin(lag, d);
    const std::vector<double> weights = cell_weights(k, d);
    double sum = 0.0;
    for (std::size_t i = 0; i < d.cells(); ++i) sum += weights[i] * lag.value(cell_state(d, i));
    return {sum, "midpoint", d.cells(), 0.0};
}

std::vector<double> discrete_action_gradient(const NonstandardLagrangian& lag, const KernelSpec& k,
                                             const DiscreteTrajectory& d) {
    const std::size_t n = d.cells();
    const double h = d.h();
    const std::vector<double> weights = cell_weights(k, d);
    std::vector<double> grad(n - 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const LagrangianPartials p = lag.partials(cell_state(d, i));
        // Cell i couples nodes i and i+1; x_mid = (x_i + x_{i+1})/2, v = (x_{i+1} - x_i)/h.
        const double left = weights[i] * (0.5 * p.dL_dx - p.dL_dxdot / h);
        const double right = weights[i] * (0.5 * p.dL_dx + p.dL_dxdot / h);
        if (i >= 1) grad[i - 1] += left;
        if (i + 1 <= n - 1) grad[i] += right;
    }
    return grad;
}

namespace {

struct Tridiagonal {
    std::vector<double> lower, diag, upper;
};

Tridiagonal action_hessian(const NonstandardLagrangian& lag, const KernelSpec& k, const DiscreteTrajectory& d) {
    const std::size_t n = d.cells();
    const std::size_t m = n - 1;
    const double h = d.h();
    const std::vector<double> weights = cell_weights(k, d);
    Tridiagonal t{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};
    const double cl[2] = {0.5, -1.0 / h};
    const double cr[2] = {0.5, 1.0 / h};
    for (std::size_t i = 0; i < n; ++i) {
        const LagrangianHessian H = lag.hessian(cell_state(d, i));
        auto quad_form = [&](const double* u, const double* v) {
            return u[0] * (H.xx * v[0] + H.x_xdot * v[1]) + u[1] * (H.x_xdot * v[0] + H.xdot_xdot * v[1]);
        };
        const double ll = weights[i] * quad_form(cl, cl);
        const double lr = weights[i] * quad_form(cl, cr);
        const double rr = weights[i] * quad_form(cr, cr);
        // Interior index of node i is i - 1.
        if (i >= 1) t.diag[i - 1] += ll;
        if (i + 1 <= m) t.diag[i] += rr;
        if (i >= 1 && i + 1 <= m) {
            t.upper[i - 1] += lr;
            t.lower[i] += lr;
        }
    }
    return t;
}

// Thomas algorithm; returns false on a vanishing pivot.
bool solve_tridiagonal(Tridiagonal t, std::vector<double>& rhs) {
    const std::size_t m = rhs.size();
    for (std::size_t i = 1; i < m; ++i) {
        if (t.diag[i - 1] == 0.0) return false;
        const double f = t.lower[i] / t.diag[i - 1];
        t.diag[i] -= f * t.upper[i - 1];
        rhs[i] -= f * rhs[i - 1];
    }
    if (t.diag[m - 1] == 0.0) return false;
    rhs[m - 1] /= t.diag[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) rhs[i] = (rhs[i] - t.upper[i] * rhs[i + 1]) / t.diag[i];
    for (double v : rhs)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace

StationarizeResult stationarize(const NonstandardLagrangian& lag, const KernelSpec& k,
                                const DiscreteTrajectory& seed, const DescentConfig& opt) {
    check_single_basin(lag, seed);
    const double sign = lag.denominator(cell_state(seed, 0)) > 0.0 ? 1.0 : -1.0;

    DiscreteTrajectory current = seed;
    std::vector<double> grad = discrete_action_gradient(lag, k, current);
    StationarizeResult out{current, max_abs(grad), 0, false, {}};
    std::size_t iter = 0;
    while (out.grad_norm >= opt.grad_tol) {
        if (iter >= opt.max_iters) {
            out.report = "NoConvergence: iteration limit reached";
            return out;
        }
        std::vector<double> step(grad.size());
        for (std::size_t i = 0; i < grad.size(); ++i) step[i] = -grad[i];
        if (!solve_tridiagonal(action_hessian(lag, k, current), step)) {
            out.report = "NoConvergence: singular Hessian";
            return out;
        }
        const double g0 = norm2(grad);
        const std::vector<double> base(current.interior().begin(), current.interior().end());
        std::vector<double> trial_values(base.size());
        double t = 1.0;
        bool accepted = false;
        for (std::size_t bt = 0; bt <= opt.max_backtracks; ++bt, t *= 0.5) {
            for (std::size_t i = 0; i < base.size(); ++i) trial_values[i] = base[i] + t * step[i];
            DiscreteTrajectory trial = current;
            trial.set_interior(trial_values);
            if (!same_basin(lag, trial, sign)) continue;
            std::vector<double> trial_grad = discrete_action_gradient(lag, k, trial);
            if (norm2(trial_grad) <= (1.0 - 1e-4 * t) * g0) {
                current = std::move(trial);
                grad = std::move(trial_grad);
                accepted = true;
                break;
            }
        }
        ++iter;
        if (!accepted) {
            out.report = "NoConvergence: line search failed";
            out.iterations = iter;
            return out;
        }
        out.trajectory = current;
        out.grad_norm = max_abs(grad);
        out.iterations = iter;
    }
    out.converged = true;
    return out;
}

}  // namespace fracdyn
