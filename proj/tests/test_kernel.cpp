#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fracdyn/errors.hpp"
#include "fracdyn/kernel.hpp"
#include "oracles.hpp"

using namespace fracdyn;
using namespace fracdyn::testing;

TEST(Kernel, ConstantIsExactlyOne) {
    const auto k = KernelSpec::constant();
    EXPECT_EQ(eval_kernel(k, 1.0, 0.3), 1.0);
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int i = 0; i < 200; ++i) {
        const double tau = u(rng);
        EXPECT_EQ(eval_kernel(k, tau + std::abs(u(rng)), tau), 1.0);
        EXPECT_EQ(log_derivative(k, tau + 1.0, tau), 0.0);
    }
}

TEST(Kernel, PowerLawValue) {
    const auto k = KernelSpec::power_law(0.5);
    EXPECT_NEAR(eval_kernel(k, 1.0, 0.75), kTwoOverSqrtPi, 1e-14);
    EXPECT_NEAR(k.gamma_alpha(), std::sqrt(M_PI), 1e-14);
}

TEST(Kernel, ExponentialValue) {
    EXPECT_NEAR(eval_kernel(KernelSpec::exponential(2.0), 1.0, 0.5), kInvE, 1e-15);
}

TEST(Kernel, LogDerivativeClosedForms) {
    EXPECT_NEAR(log_derivative(KernelSpec::exponential(2.0), 1.0, 0.5), 2.0, 1e-15);
    EXPECT_NEAR(log_derivative(KernelSpec::power_law(0.5), 1.0, 0.5), 1.0, 1e-15);
}

TEST(Kernel, LogDerivativeMatchesFiniteDifferenceOfLogKernel) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> alpha(0.05, 0.95), lambda(0.0, 5.0), tau(0.0, 0.9);
    for (int i = 0; i < 200; ++i) {
        const double t = tau(rng);
        for (const auto& k : {KernelSpec::power_law(alpha(rng)), KernelSpec::exponential(lambda(rng))}) {
            const double step = 1e-5 * std::max(1.0, std::abs(t));
            const double fd = central_fd([&](double s) { return std::log(eval_kernel(k, 1.0, s)); }, t, step);
            EXPECT_LT(std::abs(log_derivative(k, 1.0, t) - fd), 1e-6) << to_string(k.family()) << " tau=" << t;
        }
    }
}

TEST(Kernel, PowerLawApproachesConstantAsAlphaToOne) {
    const auto k = KernelSpec::power_law(0.999);
    for (int i = 0; i <= 90; ++i) {
        const double lag = 0.1 + 0.01 * i;
        EXPECT_LT(std::abs(eval_kernel(k, 1.0, 1.0 - lag) - 1.0), 0.02) << lag;
    }
}

TEST(Kernel, PowerLawLogDerivativePositiveAndIncreasing) {
    const auto k = KernelSpec::power_law(0.4);
    double prev = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double tau = 0.0005 + 0.999 * i / 1000.0;
        const double v = log_derivative(k, 1.0, tau);
        EXPECT_GT(v, 0.0);
        EXPECT_GT(v, prev);
        prev = v;
    }
}

TEST(Kernel, Errors) {
    EXPECT_THROW(KernelSpec::power_law(0.0), InvalidArgument);
    EXPECT_THROW(KernelSpec::power_law(1.0), InvalidArgument);
    EXPECT_THROW(KernelSpec::power_law(-0.2), InvalidArgument);
    EXPECT_THROW(KernelSpec::exponential(-1.0), InvalidArgument);
    const auto k = KernelSpec::power_law(0.5);
    EXPECT_THROW(eval_kernel(k, 1.0, 1.0), SingularArgument);
    EXPECT_THROW(log_derivative(k, 1.0, 1.0), SingularArgument);
    EXPECT_THROW(eval_kernel(k, 1.0, 1.5), OutOfRange);
    EXPECT_THROW(eval_kernel(KernelSpec::constant(), 1.0, 1.5), OutOfRange);
    const auto tab = KernelSpec::tabulated({0.0, 0.5, 1.0}, {1.0, 0.8, 0.6});
    EXPECT_THROW(eval_kernel(tab, 3.0, 1.0), OutOfRange);
}

TEST(Kernel, TabulatedInterpolatesLagAndDifferentiates) {
    // g(d) = exp(-1.5 d) sampled finely: behaves like the exponential kernel.
    std::vector<double> lags, vals;
    for (int i = 0; i <= 200; ++i) {
        lags.push_back(0.01 * i);
        vals.push_back(std::exp(-1.5 * 0.01 * i));
    }
    const auto tab = KernelSpec::tabulated(lags, vals);
    for (double tau : {0.1, 0.45, 0.9}) {
        EXPECT_NEAR(eval_kernel(tab, 1.0, tau), std::exp(-1.5 * (1.0 - tau)), 1e-7);
        EXPECT_NEAR(log_derivative(tab, 1.0, tau), 1.5, 1e-4);
    }
}

TEST(Kernel, TabulatedNonPositiveValueRejectedForLogDerivative) {
    const auto tab = KernelSpec::tabulated({0.0, 0.5, 1.0}, {1.0, 0.0, 0.5});
    EXPECT_THROW(log_derivative(tab, 1.0, 0.5), SingularArgument);
    EXPECT_NO_THROW(eval_kernel(tab, 1.0, 0.5));
}

TEST(KernelValidate, ConstantUnitSquare) {
    const auto d = validate(KernelSpec::constant(), 0.0, 1.0);
    EXPECT_NEAR(d.l2_integral, 1.0, 1e-15);
    EXPECT_TRUE(d.l2_finite);
    EXPECT_TRUE(d.convolution_form);
    EXPECT_TRUE(d.positive);
}

TEST(KernelValidate, PowerLawSquareIntegrability) {
    // Finite iff alpha > 1/2; closed form 2 / ((2a-1)(2a) Gamma(a)^2) on [0,1].
    const auto d7 = validate(KernelSpec::power_law(0.7), 0.0, 1.0);
    EXPECT_TRUE(d7.l2_finite);
    EXPECT_NEAR(d7.l2_integral, 2.11960803565852621361, 1e-8);
    const auto d6 = validate(KernelSpec::power_law(0.6), 0.0, 1.0);
    EXPECT_NEAR(d6.l2_integral, 3.75765773345358155147, 1e-8);
    const auto d5 = validate(KernelSpec::power_law(0.5), 0.0, 1.0);
    EXPECT_FALSE(d5.l2_finite);
    EXPECT_TRUE(std::isinf(d5.l2_integral));
    EXPECT_TRUE(d5.convolution_form);
}

TEST(KernelValidate, ExponentialByQuadrature) {
    const auto d = validate(KernelSpec::exponential(2.0), 0.0, 1.0);
    EXPECT_NEAR(d.l2_integral, 0.377289454861091772537, 1e-9);
}

TEST(KernelValidate, TabulatedReportsFirstNonPositive) {
    const auto d = validate(KernelSpec::tabulated({0.0, 0.4, 0.8, 1.2}, {1.0, 0.5, -0.1, 0.2}), 0.0, 1.0);
    EXPECT_FALSE(d.positive);
    ASSERT_TRUE(d.first_nonpositive.has_value());
    EXPECT_EQ(*d.first_nonpositive, 2u);
    const auto short_table = validate(KernelSpec::tabulated({0.0, 0.5}, {1.0, 1.0}), 0.0, 1.0);
    EXPECT_FALSE(short_table.covers_interval);
}
