// dressed.hpp — dressed-frame diagonalization of the driven qubit and
// frame conversions for 2x2 density matrices.
//
// Matrix convention used everywhere in this library: basis order
// (|1>, |0>), i.e. element (0,0) is rho_11 (excited population),
// (0,1) is rho_10, (1,0) is rho_01 and (1,1) is rho_00. sigma_z is
// diag(1, -1) so the ground state has m_z = -1.

#pragma once

#include <complex>

#include <Eigen/Dense>

#include "qsync/errors.hpp"
#include "qsync/params.hpp"

namespace qsync {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;

enum class Frame { dressed, bare_rotating, lab };

const char* frame_name(Frame f);

// Eigenframe of H = (Delta sigma_z + epsilon sigma_x)/2 together with the
// interaction coefficients of the bath coupling in that frame:
//   P0 elastic, P+ inelastic excitation, P- inelastic relaxation.
struct DressedFrame {
    double rabi = 0.0;     // delta = sqrt(Delta^2 + epsilon^2)
    double theta = 0.0;    // mixing angle in [0, pi], tan(theta) = epsilon/Delta
    double p0 = 0.0;       // epsilon / (2 delta)
    double p_plus = 0.0;   // (Delta + delta) / (2 delta)
    double p_minus = 0.0;  // (Delta - delta) / (2 delta)
};

// theta is computed as atan2(epsilon, Delta) so that Delta = 0 maps to
// theta = pi/2 without a division. Throws DegenerateFrame when the Rabi
// splitting vanishes (Delta = epsilon = 0).
DressedFrame build_dressed_frame(const SystemParams& params);

// Density matrix plus the frame it is expressed in.
struct QubitState {
    Matrix2c rho = Matrix2c::Zero();
    Frame frame = Frame::bare_rotating;
    double time = 0.0;

    double trace_error() const;        // |Tr rho - 1|
    double hermiticity_error() const;  // max |rho - rho^dagger|
    double min_eigenvalue() const;     // closed form for the 2x2 Hermitian part

    // Throws ValidationError if Hermiticity (1e-9 elementwise), unit trace
    // (1e-9) or positivity (eigenvalues >= -1e-9) is violated.
    void validate() const;
};

// |+> = (|0> + |1>)/sqrt(2) expressed in the given frame tag.
QubitState plus_state(Frame frame = Frame::bare_rotating, double time = 0.0);

// State with matrix (I + m . sigma)/2 for a Bloch vector m.
QubitState state_from_bloch(double mx, double my, double mz, Frame frame = Frame::bare_rotating);

// Unitary change of basis rho_dressed = R^dagger rho R with
// R = [[cos(theta/2), -sin(theta/2)], [sin(theta/2), cos(theta/2)]],
// i.e. the columns of R are the dressed kets in the bare basis.
// Throws FrameMismatch unless the input carries the expected tag.
QubitState rotate_to_dressed(const QubitState& state, const DressedFrame& frame);
QubitState rotate_to_bare(const QubitState& state, const DressedFrame& frame);

} // namespace qsync
