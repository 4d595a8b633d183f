#include "fracdyn/operators.hpp"

#include <algorithm>
#include <cmath>

#include "fracdyn/errors.hpp"

namespace fracdyn {

void OperatorParams::check() const {
    for (double v : {a, t, b, p_weight, q_weight})
        if (!std::isfinite(v)) throw InvalidArgument("operator parameters must be finite");
    if (!(a <= t && t <= b)) throw InvalidArgument("operator parameters require a <= t <= b");
}

SampledFunction SampledFunction::from_callable(std::function<double(double)> fn) {
    if (!fn) throw InvalidArgument("sampled function: empty callable");
    return SampledFunction(std::move(fn));
}

SampledFunction SampledFunction::from_samples(std::vector<double> grid, std::vector<double> values,
                                              Interpolation rule) {
    switch (rule) {
        case Interpolation::Linear: {
            check_grid(grid, values, "sampled function");
            auto g = std::make_shared<const std::vector<double>>(std::move(grid));
            auto v = std::make_shared<const std::vector<double>>(std::move(values));
            return SampledFunction([g, v](double tau) {
                if (!(tau >= g->front() && tau <= g->back()))
                    throw OutOfRange("sampled function evaluated outside its grid");
                auto it = std::upper_bound(g->begin(), g->end(), tau);
                std::size_t i = static_cast<std::size_t>(it - g->begin());
                i = std::clamp<std::size_t>(i, 1, g->size() - 1) - 1;
                const double s = (tau - (*g)[i]) / ((*g)[i + 1] - (*g)[i]);
                return (1.0 - s) * (*v)[i] + s * (*v)[i + 1];
            });
        }
        case Interpolation::MonotoneCubic: {
            auto h = std::make_shared<const CubicHermite>(CubicHermite::monotone(std::move(grid), std::move(values)));
            return SampledFunction([h](double tau) { return h->value(tau); });
        }
        case Interpolation::CubicSpline: {
            auto h = std::make_shared<const CubicHermite>(
                CubicHermite::natural_spline(std::move(grid), std::move(values)));
            return SampledFunction([h](double tau) { return h->value(tau); });
        }
    }
    throw InvalidArgument("unknown interpolation rule");
}

QuadratureResult integrate_left_of(const KernelSpec& k, double t, const Integrand& f, double lo, double hi,
                                   const QuadratureConfig& quad) {
    if (lo >= hi) return {};
    if (k.is_power_law()) {
        const double alpha = k.alpha();
        const double inv = 1.0 / alpha;
        auto g = [&](double u) { return f(std::clamp(t - std::pow(u, inv), lo, hi)); };
        QuadratureResult r = integrate(g, std::pow(t - hi, alpha), std::pow(t - lo, alpha), quad);
        const double scale = 1.0 / (alpha * k.gamma_alpha());
        r.value *= scale;
        r.error *= scale;
        return r;
    }
    return integrate([&](double tau) { return eval_kernel(k, t, tau) * f(tau); }, lo, hi, quad);
}

QuadratureResult integrate_right_of(const KernelSpec& k, double t, const Integrand& f, double lo,
                                    double hi, const QuadratureConfig& quad) {
    if (lo >= hi) return {};
    if (k.is_power_law()) {
        const double alpha = k.alpha();
        const double inv = 1.0 / alpha;
        auto g = [&](double u) { return f(std::clamp(t + std::pow(u, inv), lo, hi)); };
        QuadratureResult r = integrate(g, std::pow(lo - t, alpha), std::pow(hi - t, alpha), quad);
        const double scale = 1.0 / (alpha * k.gamma_alpha());
        r.value *= scale;
        r.error *= scale;
        return r;
    }
    return integrate([&](double tau) { return eval_kernel(k, tau, t) * f(tau); }, lo, hi, quad);
}

double apply_generalized(const OperatorParams& P, const KernelSpec& k, const SampledFunction& l,
                         const QuadratureConfig& quad) {
    P.check();
    const Integrand fn = [&l](double tau) { return l(tau); };
    double out = 0.0;
    if (P.p_weight != 0.0) out += P.p_weight * integrate_left_of(k, P.t, fn, P.a, P.t, quad).value;
    if (P.q_weight != 0.0) out += P.q_weight * integrate_right_of(k, P.t, fn, P.t, P.b, quad).value;
    return out;
}

double riemann_liouville(double alpha, double a, const SampledFunction& f, double t,
                         const QuadratureConfig& quad) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("Riemann-Liouville order must lie in (0, 1]");
    if (!(a <= t)) throw InvalidArgument("Riemann-Liouville integral requires a <= t");
    const KernelSpec k = alpha == 1.0 ? KernelSpec::constant() : KernelSpec::power_law(alpha);
    return apply_generalized(OperatorParams{a, t, t, 1.0, 0.0}, k, f, quad);
}

IbpResult ibp_residual(const OperatorParams& P, const KernelSpec& k, const SampledFunction& l,
                       const SampledFunction& m, const QuadratureConfig& quad) {
    OperatorParams base = P.at(P.a);
    base.check();
    if (!(P.a < P.b)) throw InvalidArgument("integration by parts needs a < b");
    const QuadratureConfig inner = quad.tightened(10.0);
    const OperatorParams conj = base.conjugate();

    IbpResult out;
    out.lhs = integrate([&](double t) { return m(t) * apply_generalized(base.at(t), k, l, inner); }, P.a, P.b,
                        quad)
                  .value;
    out.rhs = integrate([&](double t) { return l(t) * apply_generalized(conj.at(t), k, m, inner); }, P.a, P.b,
                        quad)
                  .value;
    out.residual = std::abs(out.lhs - out.rhs) / (1.0 + std::abs(out.lhs));
    return out;
}

}  // namespace fracdyn
