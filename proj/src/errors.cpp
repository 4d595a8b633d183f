#include "fracdyn/errors.hpp"

#include <sstream>

namespace fracdyn {

namespace {
std::string describe(const char* what, double at_tau) {
    std::ostringstream os;
    os.precision(17);
    os << what << " at tau = " << at_tau;
    return os.str();
}
}  // namespace

SingularDenominator::SingularDenominator(double at_tau, double w_value)
    : Error("SingularDenominator", describe("Lagrangian denominator r*xdot + s*x vanishes", at_tau)),
      w(w_value) {
    tau = at_tau;
}

ZeroCoefficient::ZeroCoefficient(double at_tau)
    : Error("ZeroCoefficient", describe("coefficient r is zero", at_tau)) {
    tau = at_tau;
}

NonFiniteState::NonFiniteState(double at_tau)
    : Error("NonFiniteState", describe("state became non-finite", at_tau)) {
    tau = at_tau;
}

ConfigError::ConfigError(std::string json_path, const std::string& msg)
    : Error("ConfigError", json_path + ": " + msg), path(std::move(json_path)) {}

}  // namespace fracdyn
