// observables.hpp — Husimi Q-function over spin coherent states, phase
// distributions, the synchronization measure S and its maximum, and Bloch
// vector conversions between the rotating and lab frames.

#pragma once

#include <cstddef>
#include <vector>

#include "qsync/dressed.hpp"

namespace qsync {

// Q(theta, phi) = <theta,phi| rho |theta,phi> / (2 pi) with the spin
// coherent state cos(theta/2)|1> + sin(theta/2) e^{i phi}|0>.
// Throws DomainError for theta outside [0, pi].
double husimi_q(const QubitState& state, double theta, double phi);

// P(phi) = integral_0^pi Q sin(theta) dtheta, evaluated in closed form:
// 1/(2 pi) + (rho10 e^{i phi} + rho01 e^{-i phi})/8.
double phase_distribution(const QubitState& state, double phi);

// S(phi) = P(phi) - 1/(2 pi) = |rho10| cos(phi + arg rho10) / 4.
// Zero for all phi iff the state has no phase preference.
double shifted_phase(const QubitState& state, double phi);

struct SMax {
    double value = 0.0;     // max_phi S(phi) = |rho10|/4, one eighth of the l1 coherence
    double phi_star = 0.0;  // argmax, -arg rho10
};
SMax s_max(const QubitState& state);

struct BlochVector {
    double x = 0.0, y = 0.0, z = 0.0;
    Frame frame = Frame::bare_rotating;
    double norm() const;
};

// (Tr sigma_x rho, Tr sigma_y rho, Tr sigma_z rho) of a rotating-frame state.
BlochVector bloch_rotating(const QubitState& state);

// Undo the rotating-frame transformation: rotation about z by omegaL * t.
BlochVector bloch_lab(const BlochVector& rotating, double t, double omega_laser);

// Rectangular evaluation grid: theta uniform over [0, pi] (inclusive),
// phi uniform over [-pi, pi). values is row-major n_theta x n_phi.
struct QGrid {
    std::vector<double> theta_axis;
    std::vector<double> phi_axis;
    std::vector<double> values;
    double time = 0.0;

    double at(std::size_t i, std::size_t j) const { return values[i * phi_axis.size() + j]; }

    // Composite quadrature of Q sin(theta) over the sphere (Simpson in
    // theta, exact uniform sum in phi); equals 1 for a valid state.
    double sphere_integral() const;
};

QGrid husimi_grid(const QubitState& state, std::size_t n_theta = 181, std::size_t n_phi = 360);

} // namespace qsync
