#include "qsync/bath.hpp"

#include <cmath>

namespace qsync {

double spectral_density(double omega, const SystemParams& params) {
    if (omega < 0.0) {
        throw DomainError("spectral_density: omega must be >= 0");
    }
    return params.gamma * omega * std::exp(-omega / params.lambda);
}

Complex correlation(double s, const SystemParams& params) {
    const Complex denom(1.0, params.lambda * s);
    return params.gamma * params.lambda * params.lambda / (denom * denom);
}

std::array<Complex, 3> memory_rhs(double t, const SystemParams& params, const DressedFrame& frame) {
    const Complex c = correlation(t, params);
    const double wl = params.omega_laser();
    const Complex phase_l = std::polar(1.0, wl * t);
    const Complex phase_d = std::polar(1.0, frame.rabi * t);
    // e^{i(wl - delta)t} = e^{i wl t} * conj(e^{i delta t})
    return {c * phase_l, c * phase_l * std::conj(phase_d), c * phase_l * phase_d};
}

} // namespace qsync
