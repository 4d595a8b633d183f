#pragma once

#include <optional>
#include <string>
#include <vector>

namespace fracdyn {

/// How a trajectory was produced.
struct Provenance {
    std::string integrator;       ///< "rk4", "dopri5", "closed-form", ...
    std::string step_policy;      ///< e.g. "fixed h=0.001"
    std::string source_equation;  ///< e.g. "euler-lagrange", "hamilton-literal"
    std::string note;             ///< truncation guard and similar remarks
};

/// Time samples of x, xdot and optionally the canonical momentum p and the
/// Hamiltonian H.
struct Trajectory {
    std::vector<double> grid;
    std::vector<double> x;
    std::vector<double> xdot;
    std::optional<std::vector<double>> p;
    std::optional<std::vector<double>> H;
    Provenance provenance;

    std::size_t size() const { return grid.size(); }
    double front() const { return grid.front(); }
    double back() const { return grid.back(); }

    /// Throws InvalidArgument on mismatched channel lengths or a grid that
    /// is not strictly increasing.
    void check() const;
};

}  // namespace fracdyn
