#include "fracdyn/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>
#include <vector>

#include "fracdyn/errors.hpp"

namespace fracdyn {

std::string to_string(QuadratureRule rule) {
    switch (rule) {
        case QuadratureRule::Trapezoid: return "trapezoid";
        case QuadratureRule::GaussLegendre: return "gauss-legendre";
        case QuadratureRule::Adaptive: return "adaptive";
    }
    return "unknown";
}

QuadratureConfig QuadratureConfig::tightened(double factor) const {
    QuadratureConfig out = *this;
    out.abs_tol /= factor;
    out.rel_tol /= factor;
    return out;
}

namespace {

double target(const QuadratureConfig& cfg, double value) {
    return std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value));
}

[[noreturn]] void fail(const QuadratureConfig& cfg, double value, double err, std::size_t nodes) {
    std::ostringstream os;
    os.precision(6);
    os << to_string(cfg.rule) << " quadrature did not reach tolerance " << target(cfg, value)
       << " (estimated error " << err << ") within " << nodes << " nodes";
    throw QuadratureFailure(os.str());
}

// Gauss-Kronrod 7/15 (QUADPACK qk15 constants).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double lo, hi, value, error;
};

Panel gauss_kronrod(const Integrand& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double sum = f(center - dx) + f(center + dx);
        kronrod += kWgk[j] * sum;
        if (j % 2 == 1) gauss += kWg[j / 2] * sum;
    }
    kronrod *= half;
    gauss *= half;
    return {lo, hi, kronrod, std::abs(kronrod - gauss)};
}

QuadratureResult adaptive(const Integrand& f, double lo, double hi, const QuadratureConfig& cfg) {
    auto by_error = [](const Panel& x, const Panel& y) {
        if (x.error != y.error) return x.error < y.error;
        return x.lo > y.lo;
    };
    std::priority_queue<Panel, std::vector<Panel>, decltype(by_error)> queue(by_error);
    Panel first = gauss_kronrod(f, lo, hi);
    std::size_t nodes = 15;
    double total = first.value;
    double total_err = first.error;
    queue.push(first);
    while (total_err > target(cfg, total)) {
        if (nodes + 30 > cfg.max_nodes) fail(cfg, total, total_err, nodes);
        Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) fail(cfg, total, total_err, nodes);
        Panel left = gauss_kronrod(f, worst.lo, mid);
        Panel right = gauss_kronrod(f, mid, worst.hi);
        nodes += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
    }
    // Re-sum in panel order so the result does not depend on update history.
    std::vector<Panel> panels;
    panels.reserve(queue.size());
    while (!queue.empty()) {
        panels.push_back(queue.top());
        queue.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.lo < y.lo; });
    QuadratureResult out;
    for (const Panel& p : panels) {
        out.value += p.value;
        out.error += p.error;
    }
    out.nodes = nodes;
    return out;
}

QuadratureResult trapezoid(const Integrand& f, double lo, double hi, const QuadratureConfig& cfg) {
    const double width = hi - lo;
    double estimate = 0.5 * width * (f(lo) + f(hi));
    std::size_t panels = 1;
    std::size_t nodes = 2;
    for (int level = 1;; ++level) {
        const std::size_t added = panels;
        if (nodes + added > cfg.max_nodes) fail(cfg, estimate, std::abs(estimate), nodes);
        const double h = width / static_cast<double>(panels);
        double midpoint_sum = 0.0;
        for (std::size_t i = 0; i < added; ++i)
            midpoint_sum += f(lo + (static_cast<double>(i) + 0.5) * h);
        const double refined = 0.5 * estimate + 0.5 * h * midpoint_sum;
        nodes += added;
        panels *= 2;
        const double err = std::abs(refined - estimate) / 3.0;
        estimate = refined;
        if (level >= 4 && err <= target(cfg, estimate)) return {estimate, err, nodes};
    }
}

struct GaussLegendreRule {
    std::array<double, 10> nodes{};
    std::array<double, 10> weights{};
};

const GaussLegendreRule& gauss_legendre_10() {
    static const GaussLegendreRule rule = [] {
        GaussLegendreRule r;
        constexpr int n = 10;
        for (int i = 0; i < n; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = pk;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            r.nodes[static_cast<std::size_t>(i)] = x;
            r.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        return r;
    }();
    return rule;
}

double composite_gauss(const Integrand& f, double lo, double hi, std::size_t panels) {
    const auto& rule = gauss_legendre_10();
    const double h = (hi - lo) / static_cast<double>(panels);
    double sum = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
        const double a = lo + static_cast<double>(p) * h;
        const double c = a + 0.5 * h;
        double panel = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) panel += rule.weights[j] * f(c + 0.5 * h * rule.nodes[j]);
        sum += 0.5 * h * panel;
    }
    return sum;
}

QuadratureResult gauss_legendre(const Integrand& f, double lo, double hi, const QuadratureConfig& cfg) {
    std::size_t panels = 1;
    double estimate = composite_gauss(f, lo, hi, panels);
    std::size_t nodes = 10;
    for (;;) {
        panels *= 2;
        if (nodes + 10 * panels > cfg.max_nodes) fail(cfg, estimate, std::abs(estimate), nodes);
        const double refined = composite_gauss(f, lo, hi, panels);
        nodes += 10 * panels;
        const double err = std::abs(refined - estimate);
        estimate = refined;
        if (err <= target(cfg, estimate)) return {estimate, err, nodes};
    }
}

}  // namespace

QuadratureResult integrate(const Integrand& f, double lo, double hi, const QuadratureConfig& cfg) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw InvalidArgument("quadrature limits must be finite");
    if (lo == hi) return {};
    if (lo > hi) {
        QuadratureResult r = integrate(f, hi, lo, cfg);
        r.value = -r.value;
        return r;
    }
    QuadratureResult r;
    switch (cfg.rule) {
        case QuadratureRule::Trapezoid: r = trapezoid(f, lo, hi, cfg); break;
        case QuadratureRule::GaussLegendre: r = gauss_legendre(f, lo, hi, cfg); break;
        case QuadratureRule::Adaptive: r = adaptive(f, lo, hi, cfg); break;
    }
    if (!std::isfinite(r.value)) throw QuadratureFailure("quadrature produced a non-finite value");
    return r;
}

}  // namespace fracdyn
