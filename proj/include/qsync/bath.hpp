// bath.hpp — Ohmic spectral density, its analytic correlation function,
// and the derivatives of the three memory coefficients Gamma_1..Gamma_3.

#pragma once

#include <array>
#include <complex>

#include "qsync/dressed.hpp"
#include "qsync/params.hpp"

namespace qsync {

// The three memory coefficients evolved alongside the density matrix.
// All are exactly zero at t = 0.
struct MemoryCoefficients {
    Complex gamma1{0.0, 0.0};
    Complex gamma2{0.0, 0.0};
    Complex gamma3{0.0, 0.0};
    double time = 0.0;
};

// J(omega) = gamma * omega * exp(-omega/lambda). Throws DomainError for
// omega < 0; the maximum sits at omega = lambda with value gamma*lambda/e.
double spectral_density(double omega, const SystemParams& params);

// C(s) = integral_0^inf J(omega) e^{-i omega s} d omega
//      = gamma lambda^2 / (1 + i lambda s)^2.
// The closed form is validated against an adaptive-quadrature oracle in
// the test suite; |C(s)| decays with envelope gamma lambda^2/(1+lambda^2 s^2).
Complex correlation(double s, const SystemParams& params);

// Time derivatives of the memory coefficients:
//   dGamma1/dt = C(t) e^{+i omegaL t}
//   dGamma2/dt = C(t) e^{+i (omegaL - delta) t}
//   dGamma3/dt = C(t) e^{+i (omegaL + delta) t}
// obtained from the double-integral definitions by differentiating the
// outer time integral after the substitution s = t - tau.
std::array<Complex, 3> memory_rhs(double t, const SystemParams& params, const DressedFrame& frame);

} // namespace qsync
