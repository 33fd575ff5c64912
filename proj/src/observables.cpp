#include "qsync/observables.hpp"

#include <cmath>
#include <numbers>

namespace qsync {

namespace {
constexpr double pi = std::numbers::pi;
constexpr double inv_two_pi = 1.0 / (2.0 * std::numbers::pi);
} // namespace

double husimi_q(const QubitState& state, double theta, double phi) {
    if (theta < 0.0 || theta > pi) {
        throw DomainError("husimi_q: theta must lie in [0, pi]");
    }
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const Complex cross = state.rho(0, 1) * std::polar(1.0, phi);
    // The rho01 term is the conjugate of the rho10 term for Hermitian rho,
    // so the imaginary parts cancel exactly.
    const double value =
        c * c * state.rho(0, 0).real() + 2.0 * c * s * cross.real() + s * s * state.rho(1, 1).real();
    return inv_two_pi * value;
}

double phase_distribution(const QubitState& state, double phi) {
    return inv_two_pi + shifted_phase(state, phi);
}

double shifted_phase(const QubitState& state, double phi) {
    // integral of cos(theta/2) sin(theta/2) sin(theta) over [0, pi] is pi/4,
    // populations integrate to the uniform 1/(2 pi).
    const Complex cross = state.rho(0, 1) * std::polar(1.0, phi);
    return 0.25 * cross.real();
}

SMax s_max(const QubitState& state) {
    SMax m;
    const Complex c = state.rho(0, 1);
    m.value = 0.25 * std::abs(c);
    m.phi_star = std::abs(c) > 0.0 ? -std::arg(c) : 0.0;
    return m;
}

double BlochVector::norm() const {
    return std::sqrt(x * x + y * y + z * z);
}

BlochVector bloch_rotating(const QubitState& state) {
    BlochVector v;
    v.x = 2.0 * state.rho(0, 1).real();
    v.y = -2.0 * state.rho(0, 1).imag();
    v.z = state.rho(0, 0).real() - state.rho(1, 1).real();
    v.frame = state.frame;
    return v;
}

BlochVector bloch_lab(const BlochVector& rotating, double t, double omega_laser) {
    const double c = std::cos(omega_laser * t);
    const double s = std::sin(omega_laser * t);
    BlochVector v;
    v.x = rotating.x * c - rotating.y * s;
    v.y = rotating.x * s + rotating.y * c;
    v.z = rotating.z;
    v.frame = Frame::lab;
    return v;
}

double QGrid::sphere_integral() const {
    const std::size_t nt = theta_axis.size();
    const std::size_t np = phi_axis.size();
    // phi is periodic and uniformly sampled, the plain sum is exact for the
    // low harmonics present in Q. theta uses composite Simpson, which needs
    // an even interval count; the trailing odd interval (if any) falls back
    // to the trapezoid rule.
    const double dphi = 2.0 * pi / static_cast<double>(np);
    const double dtheta = pi / static_cast<double>(nt - 1);

    std::vector<double> row(nt, 0.0);
    for (std::size_t i = 0; i < nt; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < np; ++j) {
            acc += at(i, j);
        }
        row[i] = acc * dphi * std::sin(theta_axis[i]);
    }

    double integral = 0.0;
    std::size_t i = 0;
    while (i + 2 < nt) {
        integral += dtheta / 3.0 * (row[i] + 4.0 * row[i + 1] + row[i + 2]);
        i += 2;
    }
    if (i + 1 < nt) {
        integral += 0.5 * dtheta * (row[i] + row[i + 1]);
    }
    return integral;
}

QGrid husimi_grid(const QubitState& state, std::size_t n_theta, std::size_t n_phi) {
    if (n_theta < 3 || n_phi < 4) {
        throw ValidationError("husimi_grid: grid too small");
    }
    QGrid grid;
    grid.time = state.time;
    grid.theta_axis.resize(n_theta);
    grid.phi_axis.resize(n_phi);
    grid.values.resize(n_theta * n_phi);
    for (std::size_t i = 0; i < n_theta; ++i) {
        grid.theta_axis[i] = pi * static_cast<double>(i) / static_cast<double>(n_theta - 1);
    }
    for (std::size_t j = 0; j < n_phi; ++j) {
        grid.phi_axis[j] = -pi + 2.0 * pi * static_cast<double>(j) / static_cast<double>(n_phi);
    }
    for (std::size_t i = 0; i < n_theta; ++i) {
        for (std::size_t j = 0; j < n_phi; ++j) {
            grid.values[i * n_phi + j] = husimi_q(state, grid.theta_axis[i], grid.phi_axis[j]);
        }
    }
    return grid;
}

} // namespace qsync
