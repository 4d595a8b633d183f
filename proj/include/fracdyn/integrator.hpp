#pragma once

#include <array>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace fracdyn {

using State2 = std::array<double, 2>;
using Rhs2 = std::function<State2(double, const State2&)>;

/// Classical 4th-order Runge-Kutta with step h (shrunk so that an integer
/// number of steps covers the interval exactly).
struct FixedStep {
    double h = 1e-3;
};

/// Dormand-Prince 5(4) with the usual elementary step-size controller.
struct AdaptiveStep {
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    std::size_t max_steps = 10'000'000;
};

using StepPolicy = std::variant<FixedStep, AdaptiveStep>;

std::string describe(const StepPolicy& policy);

struct OdeSolution {
    std::vector<double> t;
    std::vector<State2> y;
    std::string integrator;
};

/// Integrates y' = rhs(t, y) from t0 to t1 (t1 > t0). Adaptive results are
/// reported at accepted steps. Throws StepFailure when the adaptive step
/// underflows and NonFiniteState when the state overflows.
OdeSolution integrate(const Rhs2& rhs, const State2& init, double t0, double t1, const StepPolicy& policy);

}  // namespace fracdyn
