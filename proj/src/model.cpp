#include "fracdyn/model.hpp"

#include <cmath>
#include <sstream>

#include "fracdyn/errors.hpp"

namespace fracdyn {

CoefficientModel CoefficientModel::constant(double c) {
    if (!std::isfinite(c)) throw InvalidArgument("constant coefficient must be finite");
    CoefficientModel m;
    m.kind_ = Kind::Constant;
    m.coeffs_ = {c};
    return m;
}

CoefficientModel CoefficientModel::polynomial(std::vector<double> coeffs) {
    if (coeffs.empty()) throw InvalidArgument("polynomial coefficient needs at least one term");
    for (double c : coeffs)
        if (!std::isfinite(c)) throw InvalidArgument("polynomial coefficients must be finite");
    CoefficientModel m;
    m.kind_ = Kind::Polynomial;
    m.coeffs_ = std::move(coeffs);
    return m;
}

CoefficientModel CoefficientModel::tabulated(std::vector<double> grid, std::vector<double> values) {
    CoefficientModel m;
    m.kind_ = Kind::Tabulated;
    m.spline_ = CubicHermite::natural_spline(std::move(grid), std::move(values));
    return m;
}

double CoefficientModel::value(double tau) const {
    switch (kind_) {
        case Kind::Constant: return coeffs_[0];
        case Kind::Polynomial: {
            double acc = 0.0;
            for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * tau + *it;
            return acc;
        }
        case Kind::Tabulated: return spline_->value(tau);
    }
    return 0.0;
}

double CoefficientModel::derivative(double tau) const {
    switch (kind_) {
        case Kind::Constant: return 0.0;
        case Kind::Polynomial: {
            double acc = 0.0;
            for (std::size_t i = coeffs_.size(); i-- > 1;) acc = acc * tau + static_cast<double>(i) * coeffs_[i];
            return acc;
        }
        case Kind::Tabulated: return spline_->derivative(tau);
    }
    return 0.0;
}

bool CoefficientModel::is_constant() const {
    switch (kind_) {
        case Kind::Constant: return true;
        case Kind::Polynomial:
            for (std::size_t i = 1; i < coeffs_.size(); ++i)
                if (coeffs_[i] != 0.0) return false;
            return true;
        case Kind::Tabulated: return false;
    }
    return false;
}

double CoefficientModel::constant_value() const {
    if (!is_constant()) throw InvalidArgument("coefficient model is not constant");
    return coeffs_[0];
}

NonstandardLagrangian::NonstandardLagrangian(CoefficientModel r, CoefficientModel s, double epsilon)
    : r_(std::move(r)), s_(std::move(s)), epsilon_(epsilon) {
    if (!(epsilon >= 0.0)) throw InvalidArgument("singularity threshold must be nonnegative");
}

double NonstandardLagrangian::denominator(const PhaseState& st) const {
    return r_.value(st.tau) * st.xdot + s_.value(st.tau) * st.x;
}

double NonstandardLagrangian::checked_denominator(const PhaseState& st) const {
    const double w = denominator(st);
    if (!(std::abs(w) >= epsilon_)) throw SingularDenominator(st.tau, w);
    return w;
}

double NonstandardLagrangian::value(const PhaseState& st) const { return 1.0 / checked_denominator(st); }

LagrangianPartials NonstandardLagrangian::partials(const PhaseState& st) const {
    const double w = checked_denominator(st);
    const double inv_w2 = 1.0 / (w * w);
    return {-s_.value(st.tau) * inv_w2, -r_.value(st.tau) * inv_w2};
}

LagrangianHessian NonstandardLagrangian::hessian(const PhaseState& st) const {
    const double w = checked_denominator(st);
    const double c = 2.0 / (w * w * w);
    const double r = r_.value(st.tau);
    const double s = s_.value(st.tau);
    return {c * s * s, c * r * s, c * r * r};
}

double NonstandardLagrangian::momentum(const PhaseState& st) const { return partials(st).dL_dxdot; }

double NonstandardLagrangian::hamiltonian(const CanonicalState& st) const {
    const double r = r_.value(st.tau);
    if (r == 0.0) throw ZeroCoefficient(st.tau);
    return -s_.value(st.tau) * st.x * st.momentum / r;
}

double NonstandardLagrangian::legendre_hamiltonian(const PhaseState& st) const {
    return momentum(st) * st.xdot - value(st);
}

double central_difference(const std::vector<double>& grid, const std::vector<double>& y, std::size_t i) {
    const double h1 = grid[i] - grid[i - 1];
    const double h2 = grid[i + 1] - grid[i];
    if (h1 == h2) return (y[i + 1] - y[i - 1]) / (2.0 * h1);
    return -h2 / (h1 * (h1 + h2)) * y[i - 1] + (h2 - h1) / (h1 * h2) * y[i] + h1 / (h2 * (h1 + h2)) * y[i + 1];
}

void require_nonsingular(const NonstandardLagrangian& lag, const Trajectory& traj) {
    double prev_w = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const PhaseState st{traj.grid[i], traj.x[i], traj.xdot[i]};
        const double w = lag.denominator(st);
        if (!(std::abs(w) >= lag.epsilon())) throw SingularDenominator(st.tau, w);
        if (i > 0 && w * prev_w < 0.0) {
            // Linear estimate of the crossing time.
            const double s = prev_w / (prev_w - w);
            throw SingularDenominator(traj.grid[i - 1] + s * (traj.grid[i] - traj.grid[i - 1]), 0.0);
        }
        prev_w = w;
    }
}

double generic_el_residual(const Lagrangian& L, const KernelSpec& k, double b, const Trajectory& traj,
                           std::size_t index) {
    traj.check();
    if (index == 0 || index + 1 >= traj.size())
        throw EdgeOfGrid("Euler-Lagrange residual needs a node with neighbours on both sides");
    auto state = [&](std::size_t i) { return PhaseState{traj.grid[i], traj.x[i], traj.xdot[i]}; };
    std::vector<double> dL_dxdot(3);
    for (std::size_t j = 0; j < 3; ++j) dL_dxdot[j] = L.partials(state(index - 1 + j)).dL_dxdot;
    const std::vector<double> local_grid{traj.grid[index - 1], traj.grid[index], traj.grid[index + 1]};
    const double d_dtau = central_difference(local_grid, dL_dxdot, 1);
    const LagrangianPartials here = L.partials(state(index));
    const double tau = traj.grid[index];
    return here.dL_dx - d_dtau - log_derivative(k, b, tau) * here.dL_dxdot;
}

double generic_el_residual(const Lagrangian& L, const KernelSpec& k, double b, const Trajectory& traj,
                           double tau) {
    traj.check();
    const double tol = 1e-12 * std::max(1.0, traj.back() - traj.front());
    for (std::size_t i = 0; i < traj.size(); ++i)
        if (std::abs(traj.grid[i] - tau) <= tol) return generic_el_residual(L, k, b, traj, i);
    if (tau < traj.front() || tau > traj.back()) throw EdgeOfGrid("tau lies outside the trajectory grid");
    std::ostringstream os;
    os.precision(17);
    os << "tau = " << tau << " is not a node of the trajectory grid";
    throw InvalidArgument(os.str());
}

}  // namespace fracdyn
