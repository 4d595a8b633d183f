#pragma once

#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "fracdyn/config.hpp"

namespace fracdyn {

/// Empty, numeric or text cell.
using Cell = std::variant<std::monostate, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// What a subcommand produces: the table written as CSV, and the document
/// written as JSON.
struct CommandOutput {
    Table table;
    nlohmann::json document;
};

/// Shortest decimal string that reads back to the same double.
std::string format_number(double v);

std::string render_csv(const Table& table);
std::string render(const CommandOutput& out, OutputFormat format);

/// Euler-Lagrange trajectory with columns tau,x,xdot,p,H,A_coef,B_coef.
CommandOutput cmd_simulate(const RunConfig& cfg);

/// Literal Hamilton flow with columns tau,x,p,residual, where residual is
/// pdot - (s/r - kdot/k) p from the sampled p (empty at the end points).
/// Requires constant coefficients.
CommandOutput cmd_hamilton(const RunConfig& cfg);

CommandOutput cmd_classify(const RunConfig& cfg);

/// One row per value of sweep.values, in grid order. Grid points run on up
/// to FRACDYN_THREADS threads (default: hardware concurrency).
CommandOutput cmd_sweep(const RunConfig& cfg);

/// Stationary discrete trajectory between the boundary values, from a
/// straight-line seed.
CommandOutput cmd_action(const RunConfig& cfg);

/// The acceptance checks. document["passed"] is false when any check failed.
CommandOutput cmd_verify(const RunConfig& cfg);

}  // namespace fracdyn
