#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fracdyn/action.hpp"
#include "fracdyn/dynamics.hpp"
#include "fracdyn/kernel.hpp"
#include "fracdyn/model.hpp"
#include "fracdyn/quadrature.hpp"

namespace fracdyn {

struct InitialData {
    double x = 0.0;
    std::optional<double> xdot;
    std::optional<double> p;
};

struct BoundaryData {
    double x_a = 0.0;
    double x_b = 0.0;
};

struct ActionSettings {
    std::size_t N = 256;
    DescentConfig descent;
};

/// Replaces the config leaf at `path` (dotted, e.g. "kernel.alpha") by each
/// value in turn.
struct SweepSettings {
    std::string path;
    std::vector<nlohmann::json> values;
};

struct VerifySettings {
    std::vector<std::string> checks;  ///< empty: all
    std::optional<double> tolerance;
    std::uint32_t seed = 20240617;
};

enum class OutputFormat { Csv, Json };

struct OutputSettings {
    OutputFormat format = OutputFormat::Csv;
    std::string path;  ///< empty: stdout
};

/// A validated run configuration. Sections a command needs but the document
/// lacks are reported by the require_* accessors.
struct RunConfig {
    std::optional<KernelSpec> kernel;
    std::optional<CoefficientModel> r;
    std::optional<CoefficientModel> s;
    std::optional<Interval> interval;
    std::optional<InitialData> initial;
    std::optional<BoundaryData> boundary;
    StepPolicy integrator = FixedStep{};
    QuadratureConfig quadrature;
    ActionSettings action;
    SecantConfig secant;
    std::size_t classify_samples = 512;
    double guard = kDefaultGuardFraction;
    double epsilon = NonstandardLagrangian::kDefaultEpsilon;
    std::optional<SweepSettings> sweep;
    VerifySettings verify;
    OutputSettings output;

    /// The document this config was parsed from (after overrides).
    nlohmann::json source = nlohmann::json::object();

    const KernelSpec& require_kernel() const;
    NonstandardLagrangian require_lagrangian() const;
    const Interval& require_interval() const;
    const InitialData& require_initial() const;
    const BoundaryData& require_boundary() const;
    const SweepSettings& require_sweep() const;
};

/// Validates the whole document; throws ConfigError naming the offending
/// location ("$.kernel.alpha") on unknown keys, wrong types or bad values.
RunConfig parse_config(const nlohmann::json& doc);

/// Reads a JSON file. Throws ConfigError on I/O or syntax errors.
nlohmann::json load_json(const std::string& path);

/// Sets the leaf at a dotted path, creating intermediate objects. Numeric
/// segments index existing arrays.
void set_path(nlohmann::json& doc, const std::string& dotted, nlohmann::json value);

/// Applies "dotted.path=value"; value is parsed as JSON, falling back to a
/// plain string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

std::string to_string(OutputFormat format);

}  // namespace fracdyn
