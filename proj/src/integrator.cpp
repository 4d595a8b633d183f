#include "fracdyn/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fracdyn/errors.hpp"

namespace fracdyn {

std::string describe(const StepPolicy& policy) {
    std::ostringstream os;
    os.precision(17);
    if (const auto* f = std::get_if<FixedStep>(&policy)) {
        os << "fixed h=" << f->h;
    } else {
        const auto& a = std::get<AdaptiveStep>(policy);
        os << "adaptive abs_tol=" << a.abs_tol << " rel_tol=" << a.rel_tol;
    }
    return os.str();
}

namespace {

State2 axpy(const State2& y, double h, const State2& k) { return {y[0] + h * k[0], y[1] + h * k[1]}; }

void require_finite(double t, const State2& y) {
    if (!std::isfinite(y[0]) || !std::isfinite(y[1])) throw NonFiniteState(t);
}

OdeSolution rk4(const Rhs2& rhs, const State2& init, double t0, double t1, double h_req) {
    if (!(h_req > 0.0) || !std::isfinite(h_req)) throw InvalidArgument("fixed step h must be positive");
    const double span = t1 - t0;
    const double ratio = span / h_req;
    const double nearest = std::round(ratio);
    std::size_t steps = static_cast<std::size_t>(
        std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio) ? nearest : std::ceil(ratio));
    steps = std::max<std::size_t>(steps, 1);
    const double h = span / static_cast<double>(steps);

    OdeSolution sol;
    sol.integrator = "rk4";
    sol.t.resize(steps + 1);
    sol.y.resize(steps + 1);
    sol.t[0] = t0;
    sol.y[0] = init;
    require_finite(t0, init);
    State2 y = init;
    for (std::size_t i = 0; i < steps; ++i) {
        const double t = t0 + static_cast<double>(i) * h;
        const State2 k1 = rhs(t, y);
        const State2 k2 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k1));
        const State2 k3 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k2));
        const State2 k4 = rhs(t + h, axpy(y, h, k3));
        for (std::size_t j = 0; j < 2; ++j) y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        const double t_next = i + 1 == steps ? t1 : t0 + static_cast<double>(i + 1) * h;
        require_finite(t_next, y);
        sol.t[i + 1] = t_next;
        sol.y[i + 1] = y;
    }
    return sol;
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b*, the embedded error weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

OdeSolution dopri5(const Rhs2& rhs, const State2& init, double t0, double t1, const AdaptiveStep& cfg) {
    if (!(cfg.abs_tol > 0.0) || !(cfg.rel_tol >= 0.0)) throw InvalidArgument("adaptive tolerances must be positive");
    OdeSolution sol;
    sol.integrator = "dopri5";
    require_finite(t0, init);
    sol.t.push_back(t0);
    sol.y.push_back(init);

    double t = t0;
    State2 y = init;
    State2 k1 = rhs(t, y);
    double h = std::min(t1 - t0, 1e-3 * std::max(1.0, t1 - t0));
    std::size_t steps = 0;
    while (t < t1) {
        if (++steps > cfg.max_steps) throw StepFailure("adaptive integrator exceeded its step budget");
        const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
        if (h < h_min) {
            StepFailure e("adaptive step size underflow");
            e.tau = t;
            throw e;
        }
        if (t + h > t1) h = t1 - t;

        State2 k2, k3, k4, k5, k6, k7, y5;
        auto stage = [&](std::initializer_list<std::pair<double, const State2*>> terms) {
            State2 out = y;
            for (const auto& [coef, k] : terms)
                for (std::size_t j = 0; j < 2; ++j) out[j] += h * coef * (*k)[j];
            return out;
        };
        k2 = rhs(t + c2 * h, stage({{a21, &k1}}));
        k3 = rhs(t + c3 * h, stage({{a31, &k1}, {a32, &k2}}));
        k4 = rhs(t + c4 * h, stage({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        k5 = rhs(t + c5 * h, stage({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        k6 = rhs(t + h, stage({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        y5 = stage({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        k7 = rhs(t + h, y5);

        double err = 0.0;
        for (std::size_t j = 0; j < 2; ++j) {
            const double e = h * (e1 * k1[j] + e3 * k3[j] + e4 * k4[j] + e5 * k5[j] + e6 * k6[j] + e7 * k7[j]);
            const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[j]), std::abs(y5[j]));
            err += (e / scale) * (e / scale);
        }
        err = std::sqrt(err / 2.0);
        if (!std::isfinite(err)) {
            if (!std::isfinite(y5[0]) || !std::isfinite(y5[1])) {
                h *= 0.2;
                continue;
            }
        }
        if (err <= 1.0) {
            t = (t + h >= t1) ? t1 : t + h;
            y = y5;
            require_finite(t, y);
            k1 = k7;
            sol.t.push_back(t);
            sol.y.push_back(y);
            const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            h *= factor;
        } else {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
    }
    return sol;
}

}  // namespace

OdeSolution integrate(const Rhs2& rhs, const State2& init, double t0, double t1, const StepPolicy& policy) {
    if (!(t1 > t0)) throw InvalidArgument("integration interval must have t1 > t0");
    if (const auto* f = std::get_if<FixedStep>(&policy)) return rk4(rhs, init, t0, t1, f->h);
    return dopri5(rhs, init, t0, t1, std::get<AdaptiveStep>(policy));
}

}  // namespace fracdyn
