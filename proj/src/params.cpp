#include "qsync/params.hpp"

#include <cmath>

namespace qsync {

void SystemParams::validate() const {
    if (!std::isfinite(delta) || !std::isfinite(epsilon) || !std::isfinite(omega0) ||
        !std::isfinite(gamma) || !std::isfinite(lambda)) {
        throw ValidationError("SystemParams: all parameters must be finite");
    }
    if (epsilon < 0.0) {
        throw ValidationError("SystemParams: epsilon_drive >= 0 violated");
    }
    if (gamma < 0.0) {
        throw ValidationError("SystemParams: gamma_coupling >= 0 violated");
    }
    if (lambda <= 0.0) {
        throw ValidationError("SystemParams: lambda_cutoff > 0 violated");
    }
    if (omega0 <= 0.0) {
        throw ValidationError("SystemParams: omega_qubit > 0 violated");
    }
    if (omega_laser() <= 0.0) {
        throw ValidationError("SystemParams: omega_laser = omega_qubit - delta_detuning must be > 0");
    }
}

const char* regime_name(Regime r) {
    return r == Regime::markov ? "Markov" : "non-Markov";
}

SystemParams markov_preset() {
    SystemParams p;
    p.lambda = 5.0;
    return p;
}

SystemParams nonmarkov_preset() {
    SystemParams p;
    p.lambda = 0.01;
    return p;
}

} // namespace qsync
