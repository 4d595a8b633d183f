#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace fracdyn {

/// Base class for every failure raised by the library. `kind()` is the
/// machine-readable name reported by the CLI.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

    /// Time at which the failure occurred, when meaningful.
    std::optional<double> tau;

private:
    std::string kind_;
};

/// Kernel evaluated where it is singular (power-law kernel at tau = b).
class SingularArgument : public Error {
public:
    explicit SingularArgument(const std::string& msg) : Error("SingularArgument", msg) {}
};

class OutOfRange : public Error {
public:
    explicit OutOfRange(const std::string& msg) : Error("OutOfRange", msg) {}
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& msg) : Error("InvalidArgument", msg) {}
};

class QuadratureFailure : public Error {
public:
    explicit QuadratureFailure(const std::string& msg) : Error("QuadratureFailure", msg) {}
};

/// The Lagrangian denominator w = r*xdot + s*x vanished.
class SingularDenominator : public Error {
public:
    SingularDenominator(double at_tau, double w_value);
    double w;
};

class ZeroCoefficient : public Error {
public:
    explicit ZeroCoefficient(double at_tau);
};

class EdgeOfGrid : public Error {
public:
    explicit EdgeOfGrid(const std::string& msg) : Error("EdgeOfGrid", msg) {}
};

class StepFailure : public Error {
public:
    explicit StepFailure(const std::string& msg) : Error("StepFailure", msg) {}
};

class NonFiniteState : public Error {
public:
    explicit NonFiniteState(double at_tau);
};

class NoConvergence : public Error {
public:
    explicit NoConvergence(const std::string& msg) : Error("NoConvergence", msg) {}
};

/// Invalid run configuration; `path` is a JSON-path style location ("$.kernel.alpha").
class ConfigError : public Error {
public:
    ConfigError(std::string json_path, const std::string& msg);
    std::string path;
};

}  // namespace fracdyn
