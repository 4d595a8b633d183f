#include "fracdyn/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <ostream>

#include "CLI11.hpp"

#include "fracdyn/commands.hpp"
#include "fracdyn/config.hpp"
#include "fracdyn/errors.hpp"
#include "fracdyn/verify.hpp"

namespace fracdyn {

using nlohmann::json;

namespace {

struct CommonOptions {
    std::string config;
    std::vector<std::string> sets;
    std::string format;
    std::string output;
};

struct VerifyFlags {
    std::vector<std::string> checks;
    std::optional<double> tolerance;
    std::optional<std::uint32_t> seed;
    bool list = false;
};

void report(std::ostream& err, const json& payload) { err << payload.dump() << '\n'; }

json error_json(const Error& e) {
    json j = {{"error", e.kind()}, {"message", e.what()}};
    if (e.tau) j["tau"] = *e.tau;
    if (const auto* cfg = dynamic_cast<const ConfigError*>(&e)) j["path"] = cfg->path;
    if (const auto* sd = dynamic_cast<const SingularDenominator*>(&e)) j["w"] = sd->w;
    return j;
}

void add_common(CLI::App* sub, CommonOptions& opt) {
    sub->add_option("-c,--config", opt.config, "JSON run configuration");
    sub->add_option("--set", opt.sets, "Override a config leaf: dotted.path=value (repeatable)");
    sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("-o,--output", opt.output, "Write data to PATH instead of stdout");
}

RunConfig build_config(const CommonOptions& opt) {
    json doc = opt.config.empty() ? json::object() : load_json(opt.config);
    for (const auto& s : opt.sets) apply_override(doc, s);
    RunConfig cfg = parse_config(doc);
    if (opt.format == "csv") cfg.output.format = OutputFormat::Csv;
    if (opt.format == "json") cfg.output.format = OutputFormat::Json;
    if (!opt.output.empty()) cfg.output.path = opt.output;
    return cfg;
}

void emit(const std::string& data, const RunConfig& cfg, std::ostream& out) {
    if (cfg.output.path.empty()) {
        out << data;
        out.flush();
        return;
    }
    std::ofstream file(cfg.output.path, std::ios::binary);
    if (!file) throw ConfigError("$.output.path", "cannot open '" + cfg.output.path + "' for writing");
    file << data;
    if (!file.flush()) throw ConfigError("$.output.path", "write to '" + cfg.output.path + "' failed");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dynamics of the nonstandard Lagrangian 1/(r xdot + s x) under generalized fractional kernels"};
    app.name("fracdyn");
    app.require_subcommand(1, 1);

    using Command = std::function<CommandOutput(const RunConfig&)>;
    struct Entry {
        std::string name;
        std::string help;
        Command run;
    };
    const std::vector<Entry> entries = {
        {"simulate", "Integrate the Euler-Lagrange equation; CSV tau,x,xdot,p,H,A_coef,B_coef", cmd_simulate},
        {"hamilton", "Integrate the Hamilton equations; CSV tau,x,p,residual", cmd_hamilton},
        {"classify", "Classify the friction and spring coefficients over the interval", cmd_classify},
        {"sweep", "Classify and simulate over a parameter grid", cmd_sweep},
        {"action", "Stationary point of the discrete action between boundary values", cmd_action},
        {"verify", "Run the acceptance checks", cmd_verify},
    };

    CommonOptions common;
    VerifyFlags vflags;
    std::vector<CLI::App*> subs;
    for (const auto& e : entries) {
        auto* sub = app.add_subcommand(e.name, e.help);
        add_common(sub, common);
        subs.push_back(sub);
    }
    auto* verify = subs.back();
    verify->add_option("--check", vflags.checks, "Run only the named check (repeatable)")
        ->check(CLI::IsMember(check_names()));
    verify->add_option("--tolerance", vflags.tolerance, "Replace every check tolerance");
    verify->add_option("--seed", vflags.seed, "Seed for the randomized checks");
    verify->add_flag("--list", vflags.list, "List check names and exit");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        report(err, {{"error", "UsageError"}, {"message", e.what()}});
        return kExitConfigError;
    }

    const auto selected = std::find_if(subs.begin(), subs.end(), [](CLI::App* s) { return s->parsed(); });
    const Entry& entry = entries[static_cast<std::size_t>(selected - subs.begin())];
    if (entry.name == "verify" && vflags.list) {
        for (const auto& n : check_names()) out << n << '\n';
        return kExitOk;
    }

    try {
        RunConfig cfg = build_config(common);
        if (entry.name == "verify") {
            if (!vflags.checks.empty()) cfg.verify.checks = vflags.checks;
            if (vflags.tolerance) {
                if (!(*vflags.tolerance > 0.0)) throw ConfigError("$.verify.tolerance", "expected a positive number");
                cfg.verify.tolerance = vflags.tolerance;
            }
            if (vflags.seed) cfg.verify.seed = *vflags.seed;
        }
        const CommandOutput result = entry.run(cfg);
        emit(render(result, cfg.output.format), cfg, out);
        if (entry.name == "verify" && !result.document.at("passed").get<bool>()) return kExitVerifyFailed;
        return kExitOk;
    } catch (const ConfigError& e) {
        report(err, error_json(e));
        return kExitConfigError;
    } catch (const Error& e) {
        report(err, error_json(e));
        return kExitNumericFailure;
    } catch (const std::exception& e) {
        report(err, {{"error", "InternalError"}, {"message", e.what()}});
        return kExitNumericFailure;
    }
}

}  // namespace fracdyn
