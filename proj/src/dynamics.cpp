#include "fracdyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fracdyn/errors.hpp"

namespace fracdyn {

namespace {

struct AB {
    double A;
    double B;
};

// Shared by the general and constant-coefficient paths so both agree bitwise.
AB coefficients_from(double r, double rdot, double s, double sdot, double kappa, double tau) {
    if (r == 0.0) throw ZeroCoefficient(tau);
    const double A = 0.5 * (3.0 * s / r + rdot / r - kappa);
    const double B = s * s / (2.0 * r * r) - rdot * s / (2.0 * r * r) + sdot / r - (s / (2.0 * r)) * kappa;
    return {A, B};
}

std::string guard_note(const Interval& iv, double end) {
    if (end == iv.b) return {};
    std::ostringstream os;
    os.precision(17);
    os << "truncated at tau = " << end << " (guard " << (iv.b - end)
       << "): power-law kdot/k = (1 - alpha)/(b - tau) diverges at b = " << iv.b;
    return os.str();
}

void check_interval(const Interval& iv) {
    if (!(iv.a < iv.b) || !std::isfinite(iv.a) || !std::isfinite(iv.b))
        throw InvalidArgument("interval requires finite a < b");
}

}  // namespace

EquationCoefficients coefficients_AB(const NonstandardLagrangian& lag, const KernelSpec& k, double b, double tau) {
    const double kappa = log_derivative(k, b, tau);
    const AB ab = coefficients_from(lag.r().value(tau), lag.r().derivative(tau), lag.s().value(tau),
                                    lag.s().derivative(tau), kappa, tau);
    return {tau, ab.A, ab.B, kappa};
}

double eom_rhs_general(const NonstandardLagrangian& lag, const KernelSpec& k, double b, const PhaseState& st) {
    const EquationCoefficients c = coefficients_AB(lag, k, b, st.tau);
    return -(c.A * st.xdot + c.B * st.x);
}

double eom_rhs_constant(double r, double s, const KernelSpec& k, double b, const PhaseState& st) {
    const double kappa = log_derivative(k, b, st.tau);
    const AB ab = coefficients_from(r, 0.0, s, 0.0, kappa, st.tau);
    return -(ab.A * st.xdot + ab.B * st.x);
}

HamiltonRates hamilton_rhs_literal(double r, double s, const KernelSpec& k, double b, const CanonicalState& st) {
    if (r == 0.0) throw ZeroCoefficient(st.tau);
    const double kappa = log_derivative(k, b, st.tau);
    return {-s * st.x / r, (s / r - kappa) * st.momentum};
}

double integration_end(const KernelSpec& k, const Interval& iv, double guard_fraction) {
    check_interval(iv);
    if (!k.is_power_law()) return iv.b;
    if (!(guard_fraction > 0.0 && guard_fraction < 1.0))
        throw InvalidArgument("power-law guard fraction must lie in (0, 1)");
    return iv.b - guard_fraction * (iv.b - iv.a);
}

Trajectory simulate_euler_lagrange(const NonstandardLagrangian& lag, const KernelSpec& k, const Interval& iv,
                                   double x0, double v0, const StepPolicy& policy, double guard_fraction) {
    const double end = integration_end(k, iv, guard_fraction);
    const double b = iv.b;
    const Rhs2 rhs = [&](double tau, const State2& y) {
        return State2{y[1], eom_rhs_general(lag, k, b, PhaseState{tau, y[0], y[1]})};
    };
    OdeSolution sol = integrate(rhs, {x0, v0}, iv.a, end, policy);
    Trajectory traj;
    traj.grid = std::move(sol.t);
    traj.x.reserve(sol.y.size());
    traj.xdot.reserve(sol.y.size());
    for (const State2& y : sol.y) {
        traj.x.push_back(y[0]);
        traj.xdot.push_back(y[1]);
    }
    traj.provenance = {sol.integrator, describe(policy), "euler-lagrange", guard_note(iv, end)};
    return traj;
}

Trajectory simulate_hamilton(double r, double s, const KernelSpec& k, const Interval& iv, double x0, double p0,
                             const StepPolicy& policy, double guard_fraction) {
    if (r == 0.0) throw ZeroCoefficient(iv.a);
    const double end = integration_end(k, iv, guard_fraction);
    const double b = iv.b;
    const Rhs2 rhs = [&](double tau, const State2& y) {
        const HamiltonRates rates = hamilton_rhs_literal(r, s, k, b, CanonicalState{tau, y[0], y[1]});
        return State2{rates.xdot, rates.pdot};
    };
    OdeSolution sol = integrate(rhs, {x0, p0}, iv.a, end, policy);
    Trajectory traj;
    traj.grid = std::move(sol.t);
    std::vector<double> p, H;
    for (const State2& y : sol.y) {
        traj.x.push_back(y[0]);
        traj.xdot.push_back(-s * y[0] / r);
        p.push_back(y[1]);
        H.push_back(-s * y[0] * y[1] / r);
    }
    traj.p = std::move(p);
    traj.H = std::move(H);
    traj.provenance = {sol.integrator, describe(policy), "hamilton-literal", guard_note(iv, end)};
    return traj;
}

void attach_canonical(Trajectory& traj, const NonstandardLagrangian& lag) {
    traj.check();
    require_nonsingular(lag, traj);
    std::vector<double> p(traj.size()), H(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const PhaseState st{traj.grid[i], traj.x[i], traj.xdot[i]};
        p[i] = lag.momentum(st);
        H[i] = lag.hamiltonian(CanonicalState{st.tau, st.x, p[i]});
    }
    traj.p = std::move(p);
    traj.H = std::move(H);
}

std::string to_string(DampingTag tag) {
    switch (tag) {
        case DampingTag::ClassicalLimit: return "ClassicalLimit";
        case DampingTag::Damped: return "Damped";
        case DampingTag::NonPhysical: return "NonPhysical";
        case DampingTag::MixedOverInterval: return "MixedOverInterval";
    }
    return "unknown";
}

double DampingClass::min_A() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& c : samples) m = std::min(m, c.A);
    return m;
}

double DampingClass::min_B() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& c : samples) m = std::min(m, c.B);
    return m;
}

DampingClass classify_damping(const CoefficientModel& r, const CoefficientModel& s, const KernelSpec& k,
                              const Interval& iv, std::size_t samples) {
    check_interval(iv);
    if (samples == 0) throw InvalidArgument("classification needs at least one sample");
    const NonstandardLagrangian lag(r, s);
    DampingClass out;
    out.samples.reserve(samples);
    const double cell = (iv.b - iv.a) / static_cast<double>(samples);
    bool classical = true, any_negative_B = false, all_positive = true;
    for (std::size_t i = 0; i < samples; ++i) {
        const double tau = iv.a + (static_cast<double>(i) + 0.5) * cell;
        const EquationCoefficients c = coefficients_AB(lag, k, iv.b, tau);
        classical = classical && c.log_derivative == 0.0;
        any_negative_B = any_negative_B || c.B < 0.0;
        all_positive = all_positive && c.A > 0.0 && c.B > 0.0;
        out.samples.push_back(c);
    }
    if (classical) {
        out.tag = DampingTag::ClassicalLimit;
    } else if (any_negative_B) {
        out.tag = DampingTag::NonPhysical;
    } else if (all_positive) {
        out.tag = DampingTag::Damped;
    } else {
        out.tag = DampingTag::MixedOverInterval;
    }
    return out;
}

ShootResult shoot_bvp(const NonstandardLagrangian& lag, const KernelSpec& k, const Interval& iv, double x_a,
                      double x_b, const StepPolicy& policy, const SecantConfig& solver, double guard_fraction) {
    const double end = integration_end(k, iv, guard_fraction);
    auto shoot = [&](double v) { return simulate_euler_lagrange(lag, k, iv, x_a, v, policy, guard_fraction); };

    double v_prev = (x_b - x_a) / (end - iv.a);
    Trajectory t_prev = shoot(v_prev);
    double f_prev = t_prev.x.back() - x_b;
    ShootResult out;
    if (std::abs(f_prev) < solver.tol) {
        out.trajectory = std::move(t_prev);
        out.slope = v_prev;
    } else {
        double v = v_prev + 1.0;
        Trajectory t_cur = shoot(v);
        double f = t_cur.x.back() - x_b;
        std::size_t iter = 1;
        while (!(std::abs(f) < solver.tol)) {
            if (iter >= solver.max_iters) throw NoConvergence("shooting did not reach the boundary tolerance");
            if (f == f_prev) throw NoConvergence("shooting: end value does not depend on the initial slope");
            const double v_next = v - f * (v - v_prev) / (f - f_prev);
            v_prev = v;
            f_prev = f;
            v = v_next;
            t_cur = shoot(v);
            f = t_cur.x.back() - x_b;
            ++iter;
        }
        out.trajectory = std::move(t_cur);
        out.slope = v;
        out.iterations = iter;
    }
    out.miss = std::abs(out.trajectory.x.back() - x_b);
    for (std::size_t i = 0; i < out.trajectory.size(); ++i) {
        const PhaseState st{out.trajectory.grid[i], out.trajectory.x[i], out.trajectory.xdot[i]};
        if (!(std::abs(lag.denominator(st)) >= lag.epsilon())) {
            out.lagrangian_singular = true;
            break;
        }
    }
    return out;
}

double ResidualProfile::max_abs() const {
    double m = 0.0;
    for (double r : residual) m = std::max(m, std::abs(r));
    return m;
}

ResidualProfile momentum_consistency_residual(const Trajectory& traj, double r, double s, const KernelSpec& k,
                                              double b) {
    traj.check();
    if (traj.size() < 3) throw EdgeOfGrid("momentum consistency needs at least three samples");
    if (r == 0.0) throw ZeroCoefficient(traj.front());
    const NonstandardLagrangian lag(CoefficientModel::constant(r), CoefficientModel::constant(s));
    std::vector<double> p(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i)
        p[i] = lag.momentum(PhaseState{traj.grid[i], traj.x[i], traj.xdot[i]});
    ResidualProfile out;
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
        const double tau = traj.grid[i];
        const double pdot = central_difference(traj.grid, p, i);
        out.tau.push_back(tau);
        out.momentum.push_back(p[i]);
        out.residual.push_back(pdot - (s / r - log_derivative(k, b, tau)) * p[i]);
    }
    return out;
}

double hamilton_x_mode_check(double r, double s, const KernelSpec& k, const Interval& iv, double x0,
                             std::size_t samples, double guard_fraction) {
    if (r == 0.0) throw ZeroCoefficient(iv.a);
    if (samples < 2) throw InvalidArgument("mode check needs at least two samples");
    const double end = integration_end(k, iv, guard_fraction);
    const double rate = s / r;
    double worst = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double tau = iv.a + (end - iv.a) * static_cast<double>(i) / static_cast<double>(samples - 1);
        const double x = x0 * std::exp(-rate * (tau - iv.a));
        const double xdot = -rate * x;
        const double xddot = rate * rate * x;
        worst = std::max(worst, std::abs(xddot - eom_rhs_constant(r, s, k, iv.b, PhaseState{tau, x, xdot})));
    }
    return worst;
}

}  // namespace fracdyn
