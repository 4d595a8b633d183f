#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fracdyn {

/// Piecewise cubic Hermite interpolant on a strictly increasing grid.
/// Evaluation outside [front, back] throws OutOfRange.
class CubicHermite {
public:
    /// Monotone (Fritsch-Carlson / PCHIP) slopes: positive, monotone data
    /// give a positive, monotone interpolant.
    static CubicHermite monotone(std::vector<double> x, std::vector<double> y);

    /// Natural cubic spline (C2, zero second derivative at both ends).
    static CubicHermite natural_spline(std::vector<double> x, std::vector<double> y);

    /// Hermite data given directly (values and slopes).
    static CubicHermite from_slopes(std::vector<double> x, std::vector<double> y,
                                    std::vector<double> slopes);

    double value(double t) const;
    double derivative(double t) const;
    double second_derivative(double t) const;

    double front() const { return x_.front(); }
    double back() const { return x_.back(); }
    std::span<const double> abscissae() const { return x_; }
    std::span<const double> ordinates() const { return y_; }

private:
    CubicHermite(std::vector<double> x, std::vector<double> y, std::vector<double> d);
    std::size_t locate(double t) const;

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> d_;
};

/// Throws InvalidArgument unless `grid` is strictly increasing, finite and
/// has at least two points and `values` has the same length.
void check_grid(std::span<const double> grid, std::span<const double> values, const char* what);

}  // namespace fracdyn
