#include "qsync/dressed.hpp"

#include <cmath>

namespace qsync {

const char* frame_name(Frame f) {
    switch (f) {
        case Frame::dressed: return "dressed";
        case Frame::bare_rotating: return "bare_rotating";
        case Frame::lab: return "lab";
    }
    return "unknown";
}

DressedFrame build_dressed_frame(const SystemParams& params) {
    params.validate();
    const double rabi = std::hypot(params.delta, params.epsilon);
    if (rabi == 0.0) {
        throw DegenerateFrame("build_dressed_frame: delta = epsilon = 0, dressed basis undefined");
    }
    DressedFrame f;
    f.rabi = rabi;
    f.theta = std::atan2(params.epsilon, params.delta);
    f.p0 = params.epsilon / (2.0 * rabi);
    f.p_plus = (params.delta + rabi) / (2.0 * rabi);
    f.p_minus = (params.delta - rabi) / (2.0 * rabi);
    return f;
}

double QubitState::trace_error() const {
    return std::abs(rho.trace() - Complex(1.0, 0.0));
}

double QubitState::hermiticity_error() const {
    return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double QubitState::min_eigenvalue() const {
    // Eigenvalues of the Hermitian part: (tr +- sqrt((p-q)^2 + 4|c|^2))/2.
    const Matrix2c h = 0.5 * (rho + rho.adjoint());
    const double p = h(0, 0).real();
    const double q = h(1, 1).real();
    const double disc = std::hypot(p - q, 2.0 * std::abs(h(0, 1)));
    return 0.5 * (p + q - disc);
}

void QubitState::validate() const {
    if (hermiticity_error() > 1e-9) {
        throw ValidationError("QubitState: Hermiticity violated");
    }
    if (trace_error() > 1e-9) {
        throw ValidationError("QubitState: unit trace violated");
    }
    if (min_eigenvalue() < -1e-9) {
        throw ValidationError("QubitState: positivity violated");
    }
}

QubitState plus_state(Frame frame, double time) {
    QubitState s;
    s.rho << 0.5, 0.5, 0.5, 0.5;
    s.frame = frame;
    s.time = time;
    return s;
}

QubitState state_from_bloch(double mx, double my, double mz, Frame frame) {
    QubitState s;
    s.rho(0, 0) = Complex(0.5 * (1.0 + mz), 0.0);
    s.rho(0, 1) = Complex(0.5 * mx, -0.5 * my);
    s.rho(1, 0) = Complex(0.5 * mx, 0.5 * my);
    s.rho(1, 1) = Complex(0.5 * (1.0 - mz), 0.0);
    s.frame = frame;
    return s;
}

namespace {

Eigen::Matrix2d rotation_matrix(const DressedFrame& frame) {
    const double c = std::cos(0.5 * frame.theta);
    const double s = std::sin(0.5 * frame.theta);
    Eigen::Matrix2d r;
    r << c, -s, s, c;
    return r;
}

} // namespace

QubitState rotate_to_dressed(const QubitState& state, const DressedFrame& frame) {
    if (state.frame != Frame::bare_rotating) {
        throw FrameMismatch(std::string("rotate_to_dressed: expected bare_rotating state, got ") +
                            frame_name(state.frame));
    }
    const Eigen::Matrix2d r = rotation_matrix(frame);
    QubitState out;
    out.rho = r.transpose() * state.rho * r;
    out.frame = Frame::dressed;
    out.time = state.time;
    return out;
}

QubitState rotate_to_bare(const QubitState& state, const DressedFrame& frame) {
    if (state.frame != Frame::dressed) {
        throw FrameMismatch(std::string("rotate_to_bare: expected dressed state, got ") +
                            frame_name(state.frame));
    }
    const Eigen::Matrix2d r = rotation_matrix(frame);
    QubitState out;
    out.rho = r * state.rho * r.transpose();
    out.frame = Frame::bare_rotating;
    out.time = state.time;
    return out;
}

} // namespace qsync
