#include "fracdyn/commands.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>

#include "fracdyn/errors.hpp"
#include "fracdyn/verify.hpp"

namespace fracdyn {

using nlohmann::json;

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const Cell& c) {
    if (std::holds_alternative<double>(c)) return format_number(std::get<double>(c));
    if (!std::holds_alternative<std::string>(c)) return {};
    const auto& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

json cell_json(const Cell& c) {
    if (std::holds_alternative<double>(c)) {
        const double v = std::get<double>(c);
        return std::isfinite(v) ? json(v) : json(nullptr);
    }
    if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
    return nullptr;
}

json table_json(const Table& t) {
    json rows = json::array();
    for (const auto& row : t.rows) {
        json r = json::array();
        for (const auto& c : row) r.push_back(cell_json(c));
        rows.push_back(std::move(r));
    }
    return {{"columns", t.columns}, {"rows", std::move(rows)}};
}

json provenance_json(const Provenance& p) {
    return {{"integrator", p.integrator},
            {"step_policy", p.step_policy},
            {"source_equation", p.source_equation},
            {"note", p.note}};
}

Cell optional_number(double v) { return std::isfinite(v) ? Cell(v) : Cell(); }

std::size_t thread_cap() {
    std::size_t cap = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("FRACDYN_THREADS"); env && *env) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (*end != '\0' || n < 1) throw ConfigError("$FRACDYN_THREADS", "expected a positive integer");
        cap = static_cast<std::size_t>(n);
    }
    return cap;
}

std::vector<Cell> sweep_row(std::size_t index, const json& value, const RunConfig& cfg) {
    std::vector<Cell> row{static_cast<double>(index), value.is_number()   ? Cell(value.get<double>())
                                                      : value.is_string() ? Cell(value.get<std::string>())
                                                                          : Cell(value.dump())};
    const auto& k = cfg.require_kernel();
    const auto lag = cfg.require_lagrangian();
    const auto& iv = cfg.require_interval();
    const double x0 = cfg.initial ? cfg.initial->x : 1.0;
    const double v0 = cfg.initial ? cfg.initial->xdot.value_or(0.0) : 0.0;
    try {
        const auto dc = classify_damping(*cfg.r, *cfg.s, k, iv, cfg.classify_samples);
        row.insert(row.end(), {to_string(dc.tag), dc.min_A(), dc.min_B()});
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        row.resize(10);
        row[9] = e.kind();
        return row;
    }
    try {
        const auto traj = simulate_euler_lagrange(lag, k, iv, x0, v0, cfg.integrator, cfg.guard);
        double peak = 0.0;
        for (double x : traj.x) peak = std::max(peak, std::abs(x));
        const double x_end = traj.x.back();
        const double rate = std::log(std::abs(x0) / std::abs(x_end)) / (traj.back() - traj.front());
        row.insert(row.end(), {traj.back(), x_end, peak, optional_number(rate), std::string("ok")});
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        row.resize(10);
        row[9] = e.kind();
    }
    return row;
}

}  // namespace

std::string render_csv(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += csv_field(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string render(const CommandOutput& out, OutputFormat format) {
    if (format == OutputFormat::Csv) return render_csv(out.table);
    return out.document.dump() + "\n";
}

CommandOutput cmd_simulate(const RunConfig& cfg) {
    const auto& k = cfg.require_kernel();
    const auto lag = cfg.require_lagrangian();
    const auto& iv = cfg.require_interval();
    const auto& init = cfg.require_initial();
    if (!init.xdot) throw ConfigError("$.initial.xdot", "required key is missing");
    auto traj = simulate_euler_lagrange(lag, k, iv, init.x, *init.xdot, cfg.integrator, cfg.guard);
    attach_canonical(traj, lag);
    CommandOutput out;
    out.table.columns = {"tau", "x", "xdot", "p", "H", "A_coef", "B_coef"};
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto c = coefficients_AB(lag, k, iv.b, traj.grid[i]);
        out.table.rows.push_back({traj.grid[i], traj.x[i], traj.xdot[i], (*traj.p)[i], (*traj.H)[i], c.A, c.B});
    }
    out.document = table_json(out.table);
    out.document["command"] = "simulate";
    out.document["provenance"] = provenance_json(traj.provenance);
    return out;
}

CommandOutput cmd_hamilton(const RunConfig& cfg) {
    const auto& k = cfg.require_kernel();
    const auto lag = cfg.require_lagrangian();
    const auto& iv = cfg.require_interval();
    const auto& init = cfg.require_initial();
    if (!lag.r().is_constant()) throw ConfigError("$.coefficients.r", "hamilton requires a constant coefficient");
    if (!lag.s().is_constant()) throw ConfigError("$.coefficients.s", "hamilton requires a constant coefficient");
    const double r = lag.r().constant_value(), s = lag.s().constant_value();
    double p0 = 0.0;
    if (init.p) p0 = *init.p;
    else if (init.xdot) p0 = lag.momentum({iv.a, init.x, *init.xdot});
    else throw ConfigError("$.initial.p", "required key is missing (or give initial.xdot)");
    const auto traj = simulate_hamilton(r, s, k, iv, init.x, p0, cfg.integrator, cfg.guard);
    const auto& p = *traj.p;
    CommandOutput out;
    out.table.columns = {"tau", "x", "p", "residual"};
    for (std::size_t i = 0; i < traj.size(); ++i) {
        Cell residual;
        if (i > 0 && i + 1 < traj.size()) {
            const double tau = traj.grid[i];
            residual = central_difference(traj.grid, p, i) - (s / r - log_derivative(k, iv.b, tau)) * p[i];
        }
        out.table.rows.push_back({traj.grid[i], traj.x[i], p[i], residual});
    }
    out.document = table_json(out.table);
    out.document["command"] = "hamilton";
    out.document["provenance"] = provenance_json(traj.provenance);
    return out;
}

CommandOutput cmd_classify(const RunConfig& cfg) {
    const auto& k = cfg.require_kernel();
    const auto lag = cfg.require_lagrangian();
    const auto& iv = cfg.require_interval();
    const auto dc = classify_damping(lag.r(), lag.s(), k, iv, cfg.classify_samples);
    CommandOutput out;
    out.table.columns = {"tag", "min_A", "min_B", "samples"};
    out.table.rows.push_back({to_string(dc.tag), dc.min_A(), dc.min_B(), static_cast<double>(dc.samples.size())});
    out.document = {{"command", "classify"},
                    {"tag", to_string(dc.tag)},
                    {"min_A", dc.min_A()},
                    {"min_B", dc.min_B()},
                    {"samples", dc.samples.size()},
                    {"kernel", to_string(k.family())},
                    {"interval", {iv.a, iv.b}}};
    return out;
}

CommandOutput cmd_sweep(const RunConfig& cfg) {
    const auto& sw = cfg.require_sweep();
    const std::size_t n = sw.values.size();
    if (n == 0) throw ConfigError("$.sweep.values", "empty parameter grid");
    std::vector<std::vector<Cell>> rows(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                json doc = cfg.source;
                set_path(doc, sw.path, sw.values[i]);
                rows[i] = sweep_row(i, sw.values[i], parse_config(doc));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min(n, thread_cap());
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    CommandOutput out;
    out.table.columns = {"index", "value", "tag", "min_A", "min_B", "end", "x_end", "max_abs_x", "decay_rate",
                         "status"};
    out.table.rows = std::move(rows);
    out.document = table_json(out.table);
    out.document["command"] = "sweep";
    out.document["path"] = sw.path;
    return out;
}

CommandOutput cmd_action(const RunConfig& cfg) {
    const auto& k = cfg.require_kernel();
    const auto lag = cfg.require_lagrangian();
    const auto& iv = cfg.require_interval();
    const auto& bd = cfg.require_boundary();
    const std::size_t N = cfg.action.N;
    std::vector<double> interior(N - 1);
    for (std::size_t i = 1; i < N; ++i)
        interior[i - 1] = bd.x_a + (bd.x_b - bd.x_a) * static_cast<double>(i) / static_cast<double>(N);
    const DiscreteTrajectory seed(iv.a, iv.b, bd.x_a, bd.x_b, std::move(interior));
    const auto res = stationarize(lag, k, seed, cfg.action.descent);
    if (!res.converged) throw NoConvergence(res.report);
    const auto value = evaluate_action(lag, k, res.trajectory);
    const auto grad = discrete_action_gradient(lag, k, res.trajectory);
    CommandOutput out;
    out.table.columns = {"tau", "x", "grad"};
    const auto x = res.trajectory.values();
    for (std::size_t i = 0; i <= N; ++i) {
        Cell g;
        if (i > 0 && i < N) g = grad[i - 1];
        out.table.rows.push_back({res.trajectory.node(i), x[i], g});
    }
    out.document = table_json(out.table);
    out.document["command"] = "action";
    out.document["action"] = value.value;
    out.document["rule"] = value.rule;
    out.document["grad_norm"] = res.grad_norm;
    out.document["iterations"] = res.iterations;
    out.document["converged"] = res.converged;
    return out;
}

CommandOutput cmd_verify(const RunConfig& cfg) {
    VerifyOptions opt;
    opt.checks = cfg.verify.checks;
    opt.tolerance = cfg.verify.tolerance;
    opt.seed = cfg.verify.seed;
    const auto results = run_verification(opt);
    CommandOutput out;
    out.table.columns = {"criterion", "check", "passed", "measured", "threshold", "detail"};
    json checks = json::array();
    bool all = true;
    for (const auto& c : results) {
        all = all && c.passed;
        out.table.rows.push_back({static_cast<double>(c.criterion), c.name, std::string(c.passed ? "pass" : "fail"),
                                  c.measured, c.threshold, c.detail});
        checks.push_back({{"criterion", c.criterion},
                          {"check", c.name},
                          {"passed", c.passed},
                          {"measured", std::isfinite(c.measured) ? json(c.measured) : json(nullptr)},
                          {"threshold", c.threshold},
                          {"detail", c.detail}});
    }
    out.document = {{"command", "verify"}, {"passed", all}, {"seed", opt.seed}, {"checks", std::move(checks)}};
    return out;
}

}  // namespace fracdyn
