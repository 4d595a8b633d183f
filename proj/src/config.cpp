#include "fracdyn/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <string_view>

#include "fracdyn/errors.hpp"

namespace fracdyn {

using nlohmann::json;

namespace {

std::string child(const std::string& path, std::string_view key) { return path + "." + std::string(key); }

std::string element(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void expect_object(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (auto key : allowed) known = known || item.key() == key;
        if (!known) throw ConfigError(child(path, item.key()), "unknown key");
    }
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
    return v;
}

double positive(const json& j, const std::string& path) {
    const double v = number(j, path);
    if (!(v > 0.0)) throw ConfigError(path, "expected a positive number");
    return v;
}

std::size_t count(const json& j, const std::string& path, std::size_t minimum) {
    if (!j.is_number_integer() || j.get<long long>() < static_cast<long long>(minimum))
        throw ConfigError(path, "expected an integer >= " + std::to_string(minimum));
    return j.get<std::size_t>();
}

std::string text(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected a string");
    return j.get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], element(path, i)));
    return out;
}

const json& required(const json& obj, std::string_view key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(child(path, key), "required key is missing");
    return *it;
}

// Library constructors validate their own arguments; surface those failures
// at the config location.
template <class F>
auto at_path(const std::string& path, F&& build) {
    try {
        return build();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(path, e.what());
    }
}

KernelSpec parse_kernel(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    const std::string family = text(required(j, "family", path), child(path, "family"));
    return at_path(path, [&] {
        if (family == "constant") {
            expect_object(j, path, {"family"});
            return KernelSpec::constant();
        }
        if (family == "power_law_rl") {
            expect_object(j, path, {"family", "alpha"});
            return KernelSpec::power_law(number(required(j, "alpha", path), child(path, "alpha")));
        }
        if (family == "exponential") {
            expect_object(j, path, {"family", "lambda"});
            return KernelSpec::exponential(number(required(j, "lambda", path), child(path, "lambda")));
        }
        if (family == "tabulated") {
            expect_object(j, path, {"family", "tau", "k"});
            return KernelSpec::tabulated(numbers(required(j, "tau", path), child(path, "tau")),
                                         numbers(required(j, "k", path), child(path, "k")));
        }
        throw ConfigError(child(path, "family"), "unknown kernel family '" + family + "'");
    });
}

CoefficientModel parse_coefficient(const json& j, const std::string& path) {
    if (j.is_number()) return at_path(path, [&] { return CoefficientModel::constant(number(j, path)); });
    if (!j.is_object()) throw ConfigError(path, "expected a number or an object");
    const std::string kind = text(required(j, "kind", path), child(path, "kind"));
    return at_path(path, [&] {
        if (kind == "constant") {
            expect_object(j, path, {"kind", "c"});
            return CoefficientModel::constant(number(required(j, "c", path), child(path, "c")));
        }
        if (kind == "polynomial") {
            expect_object(j, path, {"kind", "coeffs"});
            return CoefficientModel::polynomial(numbers(required(j, "coeffs", path), child(path, "coeffs")));
        }
        if (kind == "tabulated") {
            expect_object(j, path, {"kind", "tau", "v"});
            return CoefficientModel::tabulated(numbers(required(j, "tau", path), child(path, "tau")),
                                               numbers(required(j, "v", path), child(path, "v")));
        }
        throw ConfigError(child(path, "kind"), "unknown coefficient kind '" + kind + "'");
    });
}

Interval parse_interval(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) throw ConfigError(path, "expected [a, b]");
    const Interval iv{number(j[0], element(path, 0)), number(j[1], element(path, 1))};
    if (!(iv.a < iv.b)) throw ConfigError(path, "expected a < b");
    return iv;
}

StepPolicy parse_integrator(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    const std::string kind = text(required(j, "kind", path), child(path, "kind"));
    if (kind == "rk4") {
        expect_object(j, path, {"kind", "h"});
        FixedStep f;
        if (j.contains("h")) f.h = positive(j["h"], child(path, "h"));
        return f;
    }
    if (kind == "adaptive") {
        expect_object(j, path, {"kind", "abs_tol", "rel_tol", "max_steps"});
        AdaptiveStep a;
        if (j.contains("abs_tol")) a.abs_tol = positive(j["abs_tol"], child(path, "abs_tol"));
        if (j.contains("rel_tol")) a.rel_tol = positive(j["rel_tol"], child(path, "rel_tol"));
        if (j.contains("max_steps")) a.max_steps = count(j["max_steps"], child(path, "max_steps"), 1);
        return a;
    }
    throw ConfigError(child(path, "kind"), "unknown integrator '" + kind + "'");
}

QuadratureConfig parse_quadrature(const json& j, const std::string& path) {
    expect_object(j, path, {"rule", "abs_tol", "rel_tol", "max_nodes"});
    QuadratureConfig q;
    if (j.contains("rule")) {
        const std::string rule = text(j["rule"], child(path, "rule"));
        if (rule == "trapezoid") q.rule = QuadratureRule::Trapezoid;
        else if (rule == "gauss-legendre") q.rule = QuadratureRule::GaussLegendre;
        else if (rule == "adaptive") q.rule = QuadratureRule::Adaptive;
        else throw ConfigError(child(path, "rule"), "unknown quadrature rule '" + rule + "'");
    }
    if (j.contains("abs_tol")) q.abs_tol = positive(j["abs_tol"], child(path, "abs_tol"));
    if (j.contains("rel_tol")) q.rel_tol = positive(j["rel_tol"], child(path, "rel_tol"));
    if (j.contains("max_nodes")) q.max_nodes = count(j["max_nodes"], child(path, "max_nodes"), 15);
    return q;
}

}  // namespace

std::string to_string(OutputFormat format) { return format == OutputFormat::Csv ? "csv" : "json"; }

RunConfig parse_config(const json& doc) {
    const std::string root = "$";
    expect_object(doc, root,
                  {"kernel", "coefficients", "interval", "initial", "boundary", "integrator", "quadrature", "action",
                   "secant", "classify", "guard", "epsilon", "sweep", "verify", "output"});
    RunConfig cfg;
    cfg.source = doc;
    if (doc.contains("kernel")) cfg.kernel = parse_kernel(doc["kernel"], "$.kernel");
    if (doc.contains("coefficients")) {
        const auto& c = doc["coefficients"];
        expect_object(c, "$.coefficients", {"r", "s"});
        cfg.r = parse_coefficient(required(c, "r", "$.coefficients"), "$.coefficients.r");
        cfg.s = parse_coefficient(required(c, "s", "$.coefficients"), "$.coefficients.s");
    }
    if (doc.contains("interval")) cfg.interval = parse_interval(doc["interval"], "$.interval");
    if (doc.contains("initial")) {
        const auto& j = doc["initial"];
        expect_object(j, "$.initial", {"x", "xdot", "p"});
        InitialData init;
        init.x = number(required(j, "x", "$.initial"), "$.initial.x");
        if (j.contains("xdot")) init.xdot = number(j["xdot"], "$.initial.xdot");
        if (j.contains("p")) init.p = number(j["p"], "$.initial.p");
        cfg.initial = init;
    }
    if (doc.contains("boundary")) {
        const auto& j = doc["boundary"];
        expect_object(j, "$.boundary", {"x_a", "x_b"});
        cfg.boundary = BoundaryData{number(required(j, "x_a", "$.boundary"), "$.boundary.x_a"),
                                    number(required(j, "x_b", "$.boundary"), "$.boundary.x_b")};
    }
    if (doc.contains("integrator")) cfg.integrator = parse_integrator(doc["integrator"], "$.integrator");
    if (doc.contains("quadrature")) cfg.quadrature = parse_quadrature(doc["quadrature"], "$.quadrature");
    if (doc.contains("action")) {
        const auto& j = doc["action"];
        expect_object(j, "$.action", {"N", "grad_tol", "max_iters", "max_backtracks"});
        if (j.contains("N")) cfg.action.N = count(j["N"], "$.action.N", 4);
        if (j.contains("grad_tol")) cfg.action.descent.grad_tol = positive(j["grad_tol"], "$.action.grad_tol");
        if (j.contains("max_iters")) cfg.action.descent.max_iters = count(j["max_iters"], "$.action.max_iters", 0);
        if (j.contains("max_backtracks"))
            cfg.action.descent.max_backtracks = count(j["max_backtracks"], "$.action.max_backtracks", 0);
    }
    if (doc.contains("secant")) {
        const auto& j = doc["secant"];
        expect_object(j, "$.secant", {"tol", "max_iters"});
        if (j.contains("tol")) cfg.secant.tol = positive(j["tol"], "$.secant.tol");
        if (j.contains("max_iters")) cfg.secant.max_iters = count(j["max_iters"], "$.secant.max_iters", 1);
    }
    if (doc.contains("classify")) {
        const auto& j = doc["classify"];
        expect_object(j, "$.classify", {"samples"});
        if (j.contains("samples")) cfg.classify_samples = count(j["samples"], "$.classify.samples", 1);
    }
    if (doc.contains("guard")) {
        cfg.guard = positive(doc["guard"], "$.guard");
        if (!(cfg.guard < 0.5)) throw ConfigError("$.guard", "expected a fraction below 0.5");
    }
    if (doc.contains("epsilon")) {
        cfg.epsilon = number(doc["epsilon"], "$.epsilon");
        if (cfg.epsilon < 0.0) throw ConfigError("$.epsilon", "expected a nonnegative number");
    }
    if (doc.contains("sweep")) {
        const auto& j = doc["sweep"];
        expect_object(j, "$.sweep", {"path", "values"});
        SweepSettings sw;
        sw.path = text(required(j, "path", "$.sweep"), "$.sweep.path");
        if (sw.path.empty()) throw ConfigError("$.sweep.path", "empty path");
        const auto& values = required(j, "values", "$.sweep");
        if (!values.is_array()) throw ConfigError("$.sweep.values", "expected an array");
        if (values.empty()) throw ConfigError("$.sweep.values", "empty parameter grid");
        sw.values.assign(values.begin(), values.end());
        cfg.sweep = std::move(sw);
    }
    if (doc.contains("verify")) {
        const auto& j = doc["verify"];
        expect_object(j, "$.verify", {"checks", "tolerance", "seed"});
        if (j.contains("checks")) {
            const auto& c = j["checks"];
            if (!c.is_array()) throw ConfigError("$.verify.checks", "expected an array of names");
            for (std::size_t i = 0; i < c.size(); ++i)
                cfg.verify.checks.push_back(text(c[i], element("$.verify.checks", i)));
        }
        if (j.contains("tolerance")) cfg.verify.tolerance = positive(j["tolerance"], "$.verify.tolerance");
        if (j.contains("seed")) {
            const std::size_t seed = count(j["seed"], "$.verify.seed", 0);
            if (seed > 0xffffffffu) throw ConfigError("$.verify.seed", "expected a 32-bit seed");
            cfg.verify.seed = static_cast<std::uint32_t>(seed);
        }
    }
    if (doc.contains("output")) {
        const auto& j = doc["output"];
        expect_object(j, "$.output", {"format", "path"});
        if (j.contains("format")) {
            const std::string f = text(j["format"], "$.output.format");
            if (f == "csv") cfg.output.format = OutputFormat::Csv;
            else if (f == "json") cfg.output.format = OutputFormat::Json;
            else throw ConfigError("$.output.format", "expected \"csv\" or \"json\"");
        }
        if (j.contains("path")) cfg.output.path = text(j["path"], "$.output.path");
    }
    return cfg;
}

const KernelSpec& RunConfig::require_kernel() const {
    if (!kernel) throw ConfigError("$.kernel", "required key is missing");
    return *kernel;
}

NonstandardLagrangian RunConfig::require_lagrangian() const {
    if (!r || !s) throw ConfigError("$.coefficients", "required key is missing");
    return NonstandardLagrangian(*r, *s, epsilon);
}

const Interval& RunConfig::require_interval() const {
    if (!interval) throw ConfigError("$.interval", "required key is missing");
    return *interval;
}

const InitialData& RunConfig::require_initial() const {
    if (!initial) throw ConfigError("$.initial", "required key is missing");
    return *initial;
}

const BoundaryData& RunConfig::require_boundary() const {
    if (!boundary) throw ConfigError("$.boundary", "required key is missing");
    return *boundary;
}

const SweepSettings& RunConfig::require_sweep() const {
    if (!sweep) throw ConfigError("$.sweep", "required key is missing");
    return *sweep;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("$", "cannot read config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("$", std::string("malformed JSON: ") + e.what());
    }
}

void set_path(json& doc, const std::string& dotted, json value) {
    if (dotted.empty()) throw ConfigError("$", "empty override path");
    json* cur = &doc;
    std::string path = "$";
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = dotted.find('.', start);
        const std::string seg = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (seg.empty()) throw ConfigError(path, "empty segment in override path '" + dotted + "'");
        json* next = nullptr;
        if (cur->is_array()) {
            std::size_t idx = 0;
            const bool numeric = seg.find_first_not_of("0123456789") == std::string::npos;
            if (numeric) idx = std::stoul(seg);
            if (!numeric || idx >= cur->size()) throw ConfigError(element(path, idx), "no such array element");
            path = element(path, idx);
            next = &(*cur)[idx];
        } else {
            if (cur->is_null()) *cur = json::object();
            if (!cur->is_object()) throw ConfigError(path, "cannot descend into a scalar");
            path = child(path, seg);
            next = &(*cur)[seg];
        }
        if (dot == std::string::npos) {
            *next = std::move(value);
            return;
        }
        cur = next;
        start = dot + 1;
    }
}

void apply_override(json& doc, const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("$", "override '" + assignment + "' is not of the form path=value");
    const std::string raw = assignment.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;
    set_path(doc, assignment.substr(0, eq), std::move(value));
}

}  // namespace fracdyn
