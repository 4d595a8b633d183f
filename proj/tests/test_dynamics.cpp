#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "fracdyn/dynamics.hpp"
#include "fracdyn/errors.hpp"
#include "oracles.hpp"

using namespace fracdyn;
using namespace fracdyn::testing;

namespace {

NonstandardLagrangian constant_lag(double r, double s) {
    return NonstandardLagrangian(CoefficientModel::constant(r), CoefficientModel::constant(s));
}

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

}  // namespace

TEST(EquationOfMotion, GeneralExamples) {
    const auto k = KernelSpec::constant();
    EXPECT_DOUBLE_EQ(eom_rhs_general(constant_lag(1, 1), k, 10.0, {0.0, 1.0, 0.0}), -0.5);
    const NonstandardLagrangian ramp(CoefficientModel::constant(1.0), CoefficientModel::polynomial({0.0, 1.0}));
    EXPECT_DOUBLE_EQ(eom_rhs_general(ramp, k, 10.0, {2.0, 1.0, 0.0}), -3.0);
    EXPECT_EQ(eom_rhs_general(constant_lag(1, 1), KernelSpec::exponential(0.3), 10.0, {0.5, 0.0, 0.0}), 0.0);
    EXPECT_THROW(eom_rhs_general(constant_lag(0, 1), k, 10.0, {0.5, 1.0, 0.0}), ZeroCoefficient);
    EXPECT_THROW(eom_rhs_general(constant_lag(1, 1), KernelSpec::power_law(0.5), 1.0, {1.0, 1.0, 0.0}),
                 SingularArgument);
}

TEST(EquationOfMotion, CoefficientTable) {
    const auto lag = constant_lag(1, 1);
    auto ab = coefficients_AB(lag, KernelSpec::constant(), 1.0, 0.5);
    EXPECT_EQ(ab.A, 1.5);
    EXPECT_EQ(ab.B, 0.5);
    ab = coefficients_AB(lag, KernelSpec::exponential(1.0), 1.0, 0.5);
    EXPECT_EQ(ab.A, 1.0);
    EXPECT_EQ(ab.B, 0.0);
    ab = coefficients_AB(lag, KernelSpec::exponential(3.0), 1.0, 0.5);
    EXPECT_EQ(ab.A, 0.0);
    EXPECT_EQ(ab.B, -1.0);
    ab = coefficients_AB(lag, KernelSpec::exponential(0.5), 1.0, 0.5);
    EXPECT_EQ(ab.A, 1.25);
    EXPECT_EQ(ab.B, 0.25);
    const NonstandardLagrangian ramp(CoefficientModel::constant(1.0), CoefficientModel::polynomial({0.0, 1.0}));
    ab = coefficients_AB(ramp, KernelSpec::constant(), 10.0, 2.0);
    EXPECT_EQ(ab.A, 3.0);
    EXPECT_EQ(ab.B, 3.0);
}

TEST(EquationOfMotion, ConstantPathIsBitwiseGeneralPath) {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(-3.0, 3.0), pos(0.1, 3.0), tau(0.0, 0.99);
    for (int i = 0; i < 500; ++i) {
        const double r = u(rng) >= 0 ? pos(rng) : -pos(rng);
        const double s = u(rng);
        const PhaseState st{tau(rng), u(rng), u(rng)};
        for (const auto& k : {KernelSpec::constant(), KernelSpec::exponential(pos(rng)), KernelSpec::power_law(0.4)}) {
            const double general = eom_rhs_general(constant_lag(r, s), k, 1.0, st);
            const double constant = eom_rhs_constant(r, s, k, 1.0, st);
            EXPECT_TRUE(bit_equal(general, constant)) << general << " vs " << constant;
            const auto ab = coefficients_AB(constant_lag(r, s), k, 1.0, st.tau);
            EXPECT_TRUE(bit_equal(-general, ab.A * st.xdot + ab.B * st.x));
        }
    }
}

TEST(EquationOfMotion, MatchesIndependentDerivationWithTimeDependentCoefficients) {
    // Clearing w^3 from the Euler-Lagrange equation of 1/w gives
    // 2 r^2 xddot = (rdot - s + kappa r)(r xdot + s x) - 2 r rdot xdot - 2 r sdot x - 2 r s xdot.
    const NonstandardLagrangian lag(CoefficientModel::polynomial({1.0, 0.3, -0.1}),
                                    CoefficientModel::polynomial({0.4, -0.2, 0.05}));
    const auto k = KernelSpec::exponential(0.9);
    std::mt19937 rng(12);
    std::uniform_real_distribution<double> u(-2.0, 2.0), tau(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const PhaseState st{tau(rng), u(rng), u(rng)};
        const double r = lag.r().value(st.tau), rd = lag.r().derivative(st.tau);
        const double s = lag.s().value(st.tau), sd = lag.s().derivative(st.tau);
        const double kappa = 0.9;
        const double want = ((rd - s + kappa * r) * (r * st.xdot + s * st.x) - 2 * r * rd * st.xdot -
                             2 * r * sd * st.x - 2 * r * s * st.xdot) /
                            (2 * r * r);
        EXPECT_NEAR(eom_rhs_general(lag, k, 2.0, st), want, 1e-12);
    }
}

TEST(HamiltonRhs, Examples) {
    auto rates = hamilton_rhs_literal(1, 1, KernelSpec::constant(), 5.0, {0.0, 1.0, -1.0});
    EXPECT_EQ(rates.xdot, -1.0);
    EXPECT_EQ(rates.pdot, -1.0);
    rates = hamilton_rhs_literal(1, 1, KernelSpec::constant(), 5.0, {0.0, 0.0, 0.0});
    EXPECT_EQ(rates.xdot, 0.0);
    EXPECT_EQ(rates.pdot, 0.0);
    rates = hamilton_rhs_literal(1, 1, KernelSpec::exponential(1.0), 5.0, {0.3, 2.0, -7.0});
    EXPECT_EQ(rates.pdot, 0.0);
}

TEST(Simulation, ClassicalLimitMode) {
    const auto traj = simulate_euler_lagrange(constant_lag(1, 1), KernelSpec::constant(), {0.0, 10.0}, 1.0, -0.5,
                                              FixedStep{1e-3});
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i)
        worst = std::max(worst, std::abs(traj.x[i] - std::exp(-0.5 * traj.grid[i])));
    EXPECT_LT(worst, 1e-8);
    EXPECT_EQ(traj.provenance.source_equation, "euler-lagrange");
    EXPECT_TRUE(traj.provenance.note.empty());
}

TEST(Simulation, HamiltonFlowClosedForm) {
    const auto traj = simulate_hamilton(1, 1, KernelSpec::constant(), {0.0, 1.0}, 1.0, -1.0, FixedStep{1e-3});
    EXPECT_NEAR(traj.x.back(), kInvE, 1e-9);
    EXPECT_NEAR(traj.p->back(), -std::exp(1.0), 1e-9);
    // H = -s x p / r = 1 along this flow.
    for (double h : *traj.H) EXPECT_NEAR(h, 1.0, 1e-9);
}

TEST(Simulation, PowerLawRunsAreTruncatedAndRecorded) {
    const auto traj = simulate_euler_lagrange(constant_lag(1, 1), KernelSpec::power_law(0.5), {0.0, 2.0}, 1.0, 0.0,
                                              FixedStep{1e-3});
    EXPECT_NEAR(traj.back(), 2.0 - 2e-3, 1e-15);
    EXPECT_FALSE(traj.provenance.note.empty());
    EXPECT_NE(traj.provenance.note.find("power-law"), std::string::npos);
}

TEST(Simulation, AttachCanonicalChannels) {
    auto traj = simulate_euler_lagrange(constant_lag(1, 1), KernelSpec::constant(), {0.0, 1.0}, 1.0, -0.5,
                                        FixedStep{1e-2});
    attach_canonical(traj, constant_lag(1, 1));
    // w = x/2 along the slow mode, so p = -4 e^tau and H = -x p = 4 e^(tau/2).
    for (std::size_t i = 0; i < traj.size(); ++i) {
        EXPECT_NEAR((*traj.p)[i], -4.0 * std::exp(traj.grid[i]), 1e-8);
        EXPECT_NEAR((*traj.H)[i], 4.0 * std::exp(0.5 * traj.grid[i]), 1e-8);
    }
    auto singular = simulate_euler_lagrange(constant_lag(1, 1), KernelSpec::constant(), {0.0, 1.0}, 1.0, -1.0,
                                            FixedStep{1e-2});
    EXPECT_THROW(attach_canonical(singular, constant_lag(1, 1)), SingularDenominator);
}

TEST(Simulation, AttachCanonicalLocatesCrossingBetweenSamples) {
    // w = cos 5t - 5 sin 5t changes sign at atan(0.2)/5 without hitting zero on the grid.
    Trajectory traj;
    for (int i = 0; i <= 100; ++i) {
        const double t = i / 100.0;
        traj.grid.push_back(t);
        traj.x.push_back(std::cos(5 * t));
        traj.xdot.push_back(-5 * std::sin(5 * t));
    }
    try {
        attach_canonical(traj, constant_lag(1, 1));
        FAIL() << "crossing not detected";
    } catch (const SingularDenominator& e) {
        ASSERT_TRUE(e.tau.has_value());
        EXPECT_NEAR(*e.tau, std::atan(0.2) / 5.0, 1e-2);
    }
}

TEST(Classification, Examples) {
    const auto one = CoefficientModel::constant(1.0);
    const Interval iv{0.0, 1.0};
    EXPECT_EQ(classify_damping(one, one, KernelSpec::exponential(0.5), iv).tag, DampingTag::Damped);
    EXPECT_EQ(classify_damping(one, one, KernelSpec::exponential(3.0), iv).tag, DampingTag::NonPhysical);
    EXPECT_EQ(classify_damping(one, one, KernelSpec::constant(), iv).tag, DampingTag::ClassicalLimit);
    // B == 0 exactly: friction only.
    const auto edge = classify_damping(one, one, KernelSpec::exponential(1.0), iv);
    EXPECT_EQ(edge.tag, DampingTag::MixedOverInterval);
    EXPECT_EQ(edge.min_B(), 0.0);
    EXPECT_EQ(edge.samples.size(), 512u);
}

TEST(Classification, SampleGridAvoidsPowerLawEndpoint) {
    const auto one = CoefficientModel::constant(1.0);
    const auto report = classify_damping(one, one, KernelSpec::power_law(0.5), {0.0, 1.0}, 64);
    EXPECT_LT(report.samples.back().tau, 1.0);
    EXPECT_NEAR(report.samples.back().tau, 1.0 - 0.5 / 64.0, 1e-15);
    // kdot/k = 0.5/(1 - tau) exceeds s/r = 1 near the end, so B turns negative.
    EXPECT_EQ(report.tag, DampingTag::NonPhysical);
}

TEST(Classification, TimeDependentCoefficients) {
    const auto r = CoefficientModel::constant(1.0);
    // s = 1 - 0.2 tau, kdot/k = 0.2: A = 1.5 s - 0.1 > 0 and B = s^2/2 - 0.2 - 0.1 s > 0 on [0,1].
    EXPECT_EQ(classify_damping(r, CoefficientModel::polynomial({1.0, -0.2}), KernelSpec::exponential(0.2), {0.0, 1.0})
                  .tag,
              DampingTag::Damped);
    // s = 0.3 - 0.3 tau: B = s^2/2 - 0.3 - 0.1 s < 0.
    EXPECT_EQ(classify_damping(r, CoefficientModel::polynomial({0.3, -0.3}), KernelSpec::exponential(0.2), {0.0, 1.0})
                  .tag,
              DampingTag::NonPhysical);
}

TEST(Classification, MixedWhenFrictionIsNegative) {
    // s/r = -1, kdot/k = 0.1: A = (-3 - 0.1)/2 < 0 while B = 0.5 + 0.05 > 0.
    const auto report = classify_damping(CoefficientModel::constant(1.0), CoefficientModel::constant(-1.0),
                                         KernelSpec::exponential(0.1), {0.0, 1.0});
    EXPECT_EQ(report.tag, DampingTag::MixedOverInterval);
    EXPECT_LT(report.min_A(), 0.0);
    EXPECT_GT(report.min_B(), 0.0);
}

TEST(Classification, ClassicalLimitIffZeroLogDerivative) {
    const auto one = CoefficientModel::constant(1.0);
    for (const auto& k : {KernelSpec::constant(), KernelSpec::exponential(0.0), KernelSpec::exponential(1e-9),
                          KernelSpec::power_law(0.9), KernelSpec::tabulated({0.0, 2.0}, {1.0, 1.0})}) {
        const auto report = classify_damping(one, one, k, {0.0, 1.0}, 128);
        bool all_zero = true;
        for (const auto& c : report.samples) all_zero = all_zero && c.log_derivative == 0.0;
        EXPECT_EQ(report.tag == DampingTag::ClassicalLimit, all_zero) << to_string(k.family());
    }
}

TEST(Classification, DampedConfigurationsDecay) {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> pos(0.2, 2.0), lam(0.0, 3.0), init(-2.0, 2.0);
    int damped = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const double r = pos(rng), s = pos(rng), lambda = lam(rng);
        const auto k = KernelSpec::exponential(lambda);
        const auto report =
            classify_damping(CoefficientModel::constant(r), CoefficientModel::constant(s), k, {0.0, 1.0});
        if (report.tag != DampingTag::Damped) continue;
        ++damped;
        const double span = 5.0 / report.min_A();
        // Initial data at rest or drifting slowly towards the origin.
        double x0 = init(rng);
        if (x0 == 0.0) x0 = 1.0;
        const double v0 = -0.1 * x0 * std::abs(init(rng));
        const auto traj = simulate_euler_lagrange(constant_lag(r, s), k, {0.0, span}, x0, v0, FixedStep{1e-2});
        EXPECT_LT(std::abs(traj.x.back()), std::abs(traj.x.front())) << r << " " << s << " " << lambda;
    }
    EXPECT_GT(damped, 5);
}

TEST(Shooting, ClassicalModeRecovered) {
    const auto res = shoot_bvp(constant_lag(1, 1), KernelSpec::constant(), {0.0, 2.0}, 1.0, kInvE, FixedStep{1e-3});
    EXPECT_NEAR(res.slope, -0.5, 1e-7);
    EXPECT_LE(res.iterations, 3u);
    EXPECT_LT(res.miss, 1e-8);
    EXPECT_FALSE(res.lagrangian_singular);
    for (std::size_t i = 0; i < res.trajectory.size(); i += 100)
        EXPECT_NEAR(res.trajectory.x[i], std::exp(-0.5 * res.trajectory.grid[i]), 1e-8);
}

TEST(Shooting, ZeroDataGiveZeroTrajectoryFlaggedSingular) {
    const auto res = shoot_bvp(constant_lag(1, 1), KernelSpec::constant(), {0.0, 1.0}, 0.0, 0.0, FixedStep{1e-2});
    EXPECT_EQ(res.slope, 0.0);
    for (double x : res.trajectory.x) EXPECT_EQ(x, 0.0);
    EXPECT_TRUE(res.lagrangian_singular);
}

TEST(Shooting, ExponentialKernelFrictionOnly) {
    const auto res = shoot_bvp(constant_lag(1, 1), KernelSpec::exponential(1.0), {0.0, 1.0}, 2.0, 1.0 + kInvE,
                               FixedStep{1e-3});
    EXPECT_NEAR(res.slope, -1.0, 1e-7);
    for (std::size_t i = 0; i < res.trajectory.size(); i += 50)
        EXPECT_NEAR(res.trajectory.x[i], 1.0 + std::exp(-res.trajectory.grid[i]), 1e-8);
}

TEST(Shooting, RecoveredSlopeReproducesBoundaryValue) {
    const auto lag = NonstandardLagrangian(CoefficientModel::polynomial({1.0, 0.1}), CoefficientModel::constant(0.8));
    for (const auto& k : {KernelSpec::exponential(0.4), KernelSpec::power_law(0.7)}) {
        const Interval iv{0.0, 1.5};
        const auto res = shoot_bvp(lag, k, iv, 1.0, 0.4, AdaptiveStep{1e-11, 1e-11});
        const auto replay = simulate_euler_lagrange(lag, k, iv, 1.0, res.slope, AdaptiveStep{1e-11, 1e-11});
        EXPECT_LT(std::abs(replay.x.back() - 0.4), 1e-8);
    }
}

TEST(MomentumConsistency, ClassicalModeExample) {
    const auto traj = simulate_euler_lagrange(constant_lag(1, 1), KernelSpec::constant(), {0.0, 1.0}, 1.0, -0.5,
                                              FixedStep{1e-3});
    const auto prof = momentum_consistency_residual(traj, 1, 1, KernelSpec::constant(), 1.0);
    EXPECT_EQ(prof.residual.size(), traj.size() - 2);
    EXPECT_NEAR(prof.momentum.front(), -4.0 * std::exp(prof.tau.front()), 1e-8);
    EXPECT_LT(prof.max_abs(), 1e-5);
}

TEST(MomentumConsistency, FrictionOnlyResidualVanishes) {
    // x = 1 + e^-tau: w = 1, p = -1, pdot = 0.
    Trajectory traj;
    for (int i = 0; i <= 100; ++i) {
        const double t = i / 100.0;
        traj.grid.push_back(t);
        traj.x.push_back(1.0 + std::exp(-t));
        traj.xdot.push_back(-std::exp(-t));
    }
    const auto prof = momentum_consistency_residual(traj, 1, 1, KernelSpec::exponential(1.0), 1.0);
    EXPECT_LT(prof.max_abs(), 1e-12);
}

TEST(MomentumConsistency, SecondOrderUnderRefinement) {
    for (const auto& k : {KernelSpec::constant(), KernelSpec::exponential(0.5)}) {
        double prev = 0.0;
        for (double h : {4e-3, 2e-3, 1e-3}) {
            const auto traj = simulate_euler_lagrange(constant_lag(1, 1), k, {0.0, 1.0}, 1.0, 0.3, FixedStep{h});
            const double err = momentum_consistency_residual(traj, 1, 1, k, 1.0).max_abs();
            if (prev > 0.0) EXPECT_GE(prev / err, 3.5) << h;
            prev = err;
        }
    }
}

TEST(MomentumConsistency, ScaledResidualInvariantUnderAmplitude) {
    const auto k = KernelSpec::exponential(0.3);
    const auto base = simulate_euler_lagrange(constant_lag(1, 1), k, {0.0, 1.0}, 1.0, 0.2, FixedStep{1e-2});
    Trajectory scaled = base;
    const double c = -2.5;
    for (auto& x : scaled.x) x *= c;
    for (auto& v : scaled.xdot) v *= c;
    const auto p1 = momentum_consistency_residual(base, 1, 1, k, 1.0);
    const auto p2 = momentum_consistency_residual(scaled, 1, 1, k, 1.0);
    for (std::size_t i = 0; i < p1.residual.size(); ++i)
        EXPECT_NEAR(p1.residual[i] / std::abs(p1.momentum[i]), p2.residual[i] / std::abs(p2.momentum[i]), 1e-12);
}

TEST(HamiltonXMode, ExamplesAndRandomDraws) {
    EXPECT_LT(hamilton_x_mode_check(1, 1, KernelSpec::constant(), {0.0, 1.0}), 1e-12);
    EXPECT_LT(hamilton_x_mode_check(1, 2, KernelSpec::exponential(0.7), {0.0, 1.0}), 1e-12);
    EXPECT_EQ(hamilton_x_mode_check(1, 2, KernelSpec::exponential(0.7), {0.0, 1.0}, 0.0), 0.0);
    std::mt19937 rng(100);
    std::uniform_real_distribution<double> pos(0.2, 3.0), lam(0.0, 4.0), alpha(0.1, 0.9), sign(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double r = pos(rng), s = pos(rng) * (sign(rng) < 0 ? -0.3 : 1.0);
        const auto k = i % 3 == 0 ? KernelSpec::constant()
                       : i % 3 == 1 ? KernelSpec::exponential(lam(rng))
                                    : KernelSpec::power_law(alpha(rng));
        EXPECT_LT(hamilton_x_mode_check(r, s, k, {0.0, 1.0}), 1e-12) << r << " " << s;
    }
}
