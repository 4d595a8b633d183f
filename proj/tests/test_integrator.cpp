#include <gtest/gtest.h>

#include <cmath>

#include "fracdyn/errors.hpp"
#include "fracdyn/integrator.hpp"

using namespace fracdyn;

namespace {
// x'' + 1.5 x' + 0.5 x = 0
const Rhs2 kDamped = [](double, const State2& y) { return State2{y[1], -1.5 * y[1] - 0.5 * y[0]}; };

double max_error_vs_mode(const OdeSolution& s) {
    double worst = 0.0;
    for (std::size_t i = 0; i < s.t.size(); ++i) worst = std::max(worst, std::abs(s.y[i][0] - std::exp(-0.5 * s.t[i])));
    return worst;
}
}  // namespace

TEST(Integrator, Rk4GridCoversIntervalExactly) {
    const auto s = integrate(kDamped, {1.0, -0.5}, 0.0, 10.0, FixedStep{1e-3});
    ASSERT_EQ(s.t.size(), 10001u);
    EXPECT_EQ(s.t.front(), 0.0);
    EXPECT_EQ(s.t.back(), 10.0);
    EXPECT_EQ(s.integrator, "rk4");
    EXPECT_LT(max_error_vs_mode(s), 1e-8);
}

TEST(Integrator, Rk4IsFourthOrder) {
    double prev = max_error_vs_mode(integrate(kDamped, {1.0, -0.5}, 0.0, 10.0, FixedStep{0.2}));
    for (double h : {0.1, 0.05}) {
        const double err = max_error_vs_mode(integrate(kDamped, {1.0, -0.5}, 0.0, 10.0, FixedStep{h}));
        const double ratio = prev / err;
        EXPECT_GT(ratio, 12.0) << h;
        EXPECT_LT(ratio, 20.0) << h;
        prev = err;
    }
}

TEST(Integrator, Dopri5MeetsTolerance) {
    const auto s = integrate(kDamped, {1.0, -0.5}, 0.0, 10.0, AdaptiveStep{1e-10, 1e-10});
    EXPECT_EQ(s.integrator, "dopri5");
    EXPECT_EQ(s.t.back(), 10.0);
    EXPECT_LT(max_error_vs_mode(s), 1e-8);
    EXPECT_LT(s.t.size(), 5000u);
    // Deterministic for a fixed policy.
    const auto again = integrate(kDamped, {1.0, -0.5}, 0.0, 10.0, AdaptiveStep{1e-10, 1e-10});
    EXPECT_EQ(s.t, again.t);
}

TEST(Integrator, OverflowRaisesNonFiniteState) {
    const Rhs2 blowup = [](double, const State2& y) { return State2{y[0] * y[0], 0.0}; };
    EXPECT_THROW(integrate(blowup, {1.0, 0.0}, 0.0, 3.0, FixedStep{1e-2}), NonFiniteState);
}

TEST(Integrator, AdaptiveUnderflowRaisesStepFailure) {
    const Rhs2 singular = [](double t, const State2&) { return State2{1.0 / ((1.0 - t) * (1.0 - t)), 0.0}; };
    EXPECT_THROW(integrate(singular, {0.0, 0.0}, 0.0, 2.0, AdaptiveStep{1e-9, 1e-9}), StepFailure);
}

TEST(Integrator, RejectsBadInput) {
    EXPECT_THROW(integrate(kDamped, {1.0, 0.0}, 1.0, 1.0, FixedStep{0.1}), InvalidArgument);
    EXPECT_THROW(integrate(kDamped, {1.0, 0.0}, 0.0, 1.0, FixedStep{-0.1}), InvalidArgument);
}
