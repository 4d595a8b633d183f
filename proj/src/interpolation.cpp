#include "fracdyn/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracdyn/errors.hpp"

namespace fracdyn {

void check_grid(std::span<const double> grid, std::span<const double> values, const char* what) {
    if (grid.size() < 2)
        throw InvalidArgument(std::string(what) + ": grid needs at least two points");
    if (grid.size() != values.size())
        throw InvalidArgument(std::string(what) + ": grid and values differ in length");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || !std::isfinite(values[i]))
            throw InvalidArgument(std::string(what) + ": non-finite entry at index " + std::to_string(i));
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw InvalidArgument(std::string(what) + ": grid not strictly increasing at index " +
                                  std::to_string(i));
    }
}

CubicHermite::CubicHermite(std::vector<double> x, std::vector<double> y, std::vector<double> d)
    : x_(std::move(x)), y_(std::move(y)), d_(std::move(d)) {}

CubicHermite CubicHermite::from_slopes(std::vector<double> x, std::vector<double> y,
                                       std::vector<double> slopes) {
    check_grid(x, y, "cubic Hermite");
    if (slopes.size() != x.size()) throw InvalidArgument("cubic Hermite: slope count mismatch");
    return CubicHermite(std::move(x), std::move(y), std::move(slopes));
}

CubicHermite CubicHermite::monotone(std::vector<double> x, std::vector<double> y) {
    check_grid(x, y, "monotone cubic");
    const std::size_t n = x.size();
    std::vector<double> h(n - 1), delta(n - 1), d(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        delta[i] = (y[i + 1] - y[i]) / h[i];
    }
    if (n == 2) {
        d[0] = d[1] = delta[0];
        return CubicHermite(std::move(x), std::move(y), std::move(d));
    }
    // Interior: weighted harmonic mean, zero at local extrema.
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            d[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    // One-sided three-point end slopes, limited to preserve shape.
    auto end_slope = [](double h0, double h1, double del0, double del1) {
        double s = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
        if (s * del0 <= 0.0) {
            s = 0.0;
        } else if (del0 * del1 <= 0.0 && std::abs(s) > std::abs(3.0 * del0)) {
            s = 3.0 * del0;
        }
        return s;
    };
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    return CubicHermite(std::move(x), std::move(y), std::move(d));
}

CubicHermite CubicHermite::natural_spline(std::vector<double> x, std::vector<double> y) {
    check_grid(x, y, "cubic spline");
    const std::size_t n = x.size();
    // Solve for second derivatives M with M_0 = M_{n-1} = 0 (Thomas algorithm).
    std::vector<double> m(n, 0.0);
    if (n > 2) {
        const std::size_t k = n - 2;
        std::vector<double> diag(k), upper(k), rhs(k);
        for (std::size_t j = 0; j < k; ++j) {
            const std::size_t i = j + 1;
            const double h0 = x[i] - x[i - 1];
            const double h1 = x[i + 1] - x[i];
            diag[j] = 2.0 * (h0 + h1);
            upper[j] = h1;
            rhs[j] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
        }
        for (std::size_t j = 1; j < k; ++j) {
            const double lower = x[j + 1] - x[j];
            const double f = lower / diag[j - 1];
            diag[j] -= f * upper[j - 1];
            rhs[j] -= f * rhs[j - 1];
        }
        m[k] = rhs[k - 1] / diag[k - 1];
        for (std::size_t j = k - 1; j-- > 0;) m[j + 1] = (rhs[j] - upper[j] * m[j + 2]) / diag[j];
    }
    std::vector<double> d(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = x[i + 1] - x[i];
        d[i] = (y[i + 1] - y[i]) / h - h * (2.0 * m[i] + m[i + 1]) / 6.0;
    }
    {
        const double h = x[n - 1] - x[n - 2];
        d[n - 1] = (y[n - 1] - y[n - 2]) / h + h * (m[n - 2] + 2.0 * m[n - 1]) / 6.0;
    }
    return CubicHermite(std::move(x), std::move(y), std::move(d));
}

std::size_t CubicHermite::locate(double t) const {
    if (!(t >= x_.front() && t <= x_.back()))
        throw OutOfRange("interpolation argument " + std::to_string(t) + " outside [" +
                         std::to_string(x_.front()) + ", " + std::to_string(x_.back()) + "]");
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    if (i == 0) i = 1;
    if (i >= x_.size()) i = x_.size() - 1;
    return i - 1;
}

double CubicHermite::value(double t) const {
    const std::size_t i = locate(t);
    const double h = x_[i + 1] - x_[i];
    const double s = (t - x_[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

double CubicHermite::derivative(double t) const {
    const std::size_t i = locate(t);
    const double h = x_[i + 1] - x_[i];
    const double s = (t - x_[i]) / h;
    const double s2 = s * s;
    const double dh00 = 6 * s2 - 6 * s;
    const double dh10 = 3 * s2 - 4 * s + 1;
    const double dh01 = -6 * s2 + 6 * s;
    const double dh11 = 3 * s2 - 2 * s;
    return (dh00 * y_[i] + dh01 * y_[i + 1]) / h + dh10 * d_[i] + dh11 * d_[i + 1];
}

double CubicHermite::second_derivative(double t) const {
    const std::size_t i = locate(t);
    const double h = x_[i + 1] - x_[i];
    const double s = (t - x_[i]) / h;
    const double ddh00 = 12 * s - 6;
    const double ddh10 = 6 * s - 4;
    const double ddh01 = -12 * s + 6;
    const double ddh11 = 6 * s - 2;
    return (ddh00 * y_[i] + ddh01 * y_[i + 1]) / (h * h) + (ddh10 * d_[i] + ddh11 * d_[i + 1]) / h;
}

}  // namespace fracdyn
