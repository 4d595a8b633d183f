#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fracdyn/errors.hpp"
#include "fracdyn/interpolation.hpp"

using namespace fracdyn;

TEST(CubicHermite, MonotoneKeepsPositiveDataPositive) {
    // Sharp drop next to a plateau: an unconstrained spline would undershoot.
    std::vector<double> x{0, 1, 2, 3, 4, 5};
    std::vector<double> y{1.0, 1.0, 1.0, 1e-3, 1e-3, 1e-3};
    auto h = CubicHermite::monotone(x, y);
    for (int i = 0; i <= 5000; ++i) {
        const double t = 5.0 * i / 5000.0;
        EXPECT_GT(h.value(t), 0.0) << t;
    }
    auto spline = CubicHermite::natural_spline(x, y);
    double min_spline = 1.0;
    for (int i = 0; i <= 5000; ++i) min_spline = std::min(min_spline, spline.value(5.0 * i / 5000.0));
    EXPECT_LT(min_spline, 0.0);
}

TEST(CubicHermite, MonotoneDataGiveMonotoneInterpolant) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> step(0.01, 1.0);
    std::vector<double> x{0.0}, y{0.0};
    for (int i = 0; i < 20; ++i) {
        x.push_back(x.back() + step(rng));
        y.push_back(y.back() + step(rng) * step(rng));
    }
    auto h = CubicHermite::monotone(x, y);
    double prev = h.value(x.front());
    for (int i = 1; i <= 4000; ++i) {
        const double v = h.value(x.front() + (x.back() - x.front()) * i / 4000.0);
        EXPECT_GE(v, prev - 1e-14);
        prev = v;
    }
}

TEST(CubicHermite, NaturalSplineReproducesLinesAndIsTwiceDifferentiable) {
    std::vector<double> x{0.0, 0.3, 0.7, 1.2, 2.0};
    std::vector<double> y;
    for (double t : x) y.push_back(2.0 * t - 1.0);
    auto s = CubicHermite::natural_spline(x, y);
    for (double t : {0.0, 0.15, 0.5, 1.9, 2.0}) {
        EXPECT_NEAR(s.value(t), 2.0 * t - 1.0, 1e-14);
        EXPECT_NEAR(s.derivative(t), 2.0, 1e-13);
    }
    // Second derivative is continuous across knots for curved data.
    std::vector<double> yc;
    for (double t : x) yc.push_back(std::sin(t));
    auto c = CubicHermite::natural_spline(x, yc);
    for (std::size_t i = 1; i + 1 < x.size(); ++i)
        EXPECT_NEAR(c.second_derivative(x[i] - 1e-12), c.second_derivative(x[i] + 1e-12), 1e-9);
    EXPECT_NEAR(c.second_derivative(0.0), 0.0, 1e-12);
}

TEST(CubicHermite, DerivativeMatchesFiniteDifference) {
    std::vector<double> x, y;
    for (int i = 0; i <= 10; ++i) {
        x.push_back(0.1 * i);
        y.push_back(std::exp(0.1 * i));
    }
    auto h = CubicHermite::monotone(x, y);
    for (double t : {0.05, 0.33, 0.71}) {
        const double fd = (h.value(t + 1e-6) - h.value(t - 1e-6)) / 2e-6;
        EXPECT_NEAR(h.derivative(t), fd, 1e-7);
    }
}

TEST(CubicHermite, RejectsBadGridsAndOutOfRange) {
    EXPECT_THROW(CubicHermite::monotone({0.0, 0.0, 1.0}, {1, 2, 3}), InvalidArgument);
    EXPECT_THROW(CubicHermite::monotone({0.0}, {1}), InvalidArgument);
    EXPECT_THROW(CubicHermite::monotone({0.0, 1.0}, {1}), InvalidArgument);
    auto h = CubicHermite::monotone({0.0, 1.0, 2.0}, {1, 2, 3});
    EXPECT_THROW(h.value(2.5), OutOfRange);
    EXPECT_THROW(h.value(-0.1), OutOfRange);
    EXPECT_DOUBLE_EQ(h.value(2.0), 3.0);
}
