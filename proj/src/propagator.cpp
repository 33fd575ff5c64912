#include "qsync/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qsync {

double EvolutionConfig::default_max_step(const SystemParams& params,
                                         const DressedFrame& frame) const {
    const double fastest = std::min({1.0 / frame.rabi,
                                     1.0 / (params.omega_laser() + frame.rabi),
                                     1.0 / params.lambda});
    return std::min(0.01 * fastest, t_end / 100.0);
}

double EvolutionConfig::resolved_max_step(const SystemParams& params,
                                          const DressedFrame& frame) const {
    return max_step > 0.0 ? max_step : default_max_step(params, frame);
}

std::vector<double> EvolutionConfig::uniform_times(double t_end, std::size_t n) {
    std::vector<double> t(n);
    if (n == 1) {
        t[0] = t_end;
        return t;
    }
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = t_end * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    t.back() = t_end;
    return t;
}

void EvolutionConfig::validate() const {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw ValidationError("EvolutionConfig: t_end must be positive and finite");
    }
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
        throw ValidationError("EvolutionConfig: tolerances must be > 0");
    }
    if (sample_times.empty()) {
        throw ValidationError("EvolutionConfig: sample_times must be non-empty");
    }
    double prev = -std::numeric_limits<double>::infinity();
    for (double t : sample_times) {
        if (!(t >= 0.0) || t > t_end) {
            throw ValidationError("EvolutionConfig: sample_times must lie in [0, t_end]");
        }
        if (t <= prev) {
            throw ValidationError("EvolutionConfig: sample_times must be strictly increasing");
        }
        prev = t;
    }
}

namespace {

// Coefficient products of the dissipator, fixed per dressed frame.
struct DissipatorWeights {
    double p00, p0p, p0m, pmm, ppp, pmp;  // P0^2, P0 P+, P0 P-, P-^2, P+^2, P+ P-
    explicit DissipatorWeights(const DressedFrame& f)
        : p00(f.p0 * f.p0),
          p0p(f.p0 * f.p_plus),
          p0m(f.p0 * f.p_minus),
          pmm(f.p_minus * f.p_minus),
          ppp(f.p_plus * f.p_plus),
          pmp(f.p_plus * f.p_minus) {}
};

// Element-wise evaluation of the master equation for a general 2x2 matrix
// (p c; d q). Collecting the nine sandwich terms of the dissipator D gives
//   D00 = G1 (P0P+ d + P0P- c) + G2 P-^2 q - G3 P+^2 p
//   D01 = G1 (-2 P0^2 c + P0P+ (p+q)) + G2 (-2 P0P- q + P+P- d) - G3 P+^2 c
//   D10 = G1 (-2 P0^2 d - P0P- (p+q)) - G2 P-^2 d + G3 (2 P0P+ p + P+P- c)
//   D11 = -D00
// and the full derivative is -(i delta/2)[sigma_z, rho] + D + D^dagger.
// The independent product-based oracle in the test suite checks this algebra.
inline void master_rhs_elements(const DissipatorWeights& w, double rabi,
                                Complex p, Complex c, Complex d, Complex q,
                                Complex g1, Complex g2, Complex g3,
                                Complex& dp, Complex& dc, Complex& dd, Complex& dq) {
    const Complex tr = p + q;
    const Complex d00 = g1 * (w.p0p * d + w.p0m * c) + g2 * (w.pmm * q) - g3 * (w.ppp * p);
    const Complex d01 =
        g1 * (-2.0 * w.p00 * c + w.p0p * tr) + g2 * (-2.0 * w.p0m * q + w.pmp * d) - g3 * (w.ppp * c);
    const Complex d10 =
        g1 * (-2.0 * w.p00 * d - w.p0m * tr) - g2 * (w.pmm * d) + g3 * (2.0 * w.p0p * p + w.pmp * c);

    const Complex iw(0.0, rabi);
    dp = d00 + std::conj(d00);
    dc = -iw * c + d01 + std::conj(d10);
    dd = iw * d + d10 + std::conj(d01);
    dq = -dp;
}

// Co-integrated state: rho elements followed by the memory coefficients.
using StateVec = Eigen::Matrix<Complex, 7, 1>;

struct CoupledRhs {
    SystemParams params;
    DressedFrame frame;
    DissipatorWeights weights;
    double omega_l;

    CoupledRhs(const SystemParams& p, const DressedFrame& f)
        : params(p), frame(f), weights(f), omega_l(p.omega_laser()) {}

    void operator()(double t, const StateVec& y, StateVec& dy) const {
        const Complex corr = correlation(t, params);
        const Complex phase_l = std::polar(1.0, omega_l * t);
        const Complex phase_d = std::polar(1.0, frame.rabi * t);
        dy[4] = corr * phase_l;
        dy[5] = corr * phase_l * std::conj(phase_d);
        dy[6] = corr * phase_l * phase_d;
        master_rhs_elements(weights, frame.rabi, y[0], y[1], y[2], y[3], y[4], y[5], y[6],
                            dy[0], dy[1], dy[2], dy[3]);
    }
};

// Dormand-Prince 5(4) tableau.
constexpr double A21 = 1.0 / 5.0;
constexpr double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0;
constexpr double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0;
constexpr double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0, A53 = 64448.0 / 6561.0,
                 A54 = -212.0 / 729.0;
constexpr double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0, A63 = 46732.0 / 5247.0,
                 A64 = 49.0 / 176.0, A65 = -5103.0 / 18656.0;
constexpr double B1 = 35.0 / 384.0, B3 = 500.0 / 1113.0, B4 = 125.0 / 192.0,
                 B5 = -2187.0 / 6784.0, B6 = 11.0 / 84.0;
constexpr double C2 = 1.0 / 5.0, C3 = 3.0 / 10.0, C4 = 4.0 / 5.0, C5 = 8.0 / 9.0;
// b - bhat, the embedded 4th-order error weights.
constexpr double E1 = 71.0 / 57600.0, E3 = -71.0 / 16695.0, E4 = 71.0 / 1920.0,
                 E5 = -17253.0 / 339200.0, E6 = 22.0 / 525.0, E7 = -1.0 / 40.0;
// Dense-output weights for the 4th-order continuous extension.
constexpr double D1 = -12715105075.0 / 11282082432.0;
constexpr double D3 = 87487479700.0 / 32700410799.0;
constexpr double D4 = -10690763975.0 / 1880347072.0;
constexpr double D5 = 701980252875.0 / 199316789632.0;
constexpr double D6 = -1453857185.0 / 822651844.0;
constexpr double D7 = 69997945.0 / 29380423.0;

struct DenseSegment {
    double t0 = 0.0, h = 0.0;
    StateVec r1, r2, r3, r4, r5;

    StateVec eval(double t) const {
        const double theta = (t - t0) / h;
        const double theta1 = 1.0 - theta;
        return r1 + theta * (r2 + theta1 * (r3 + theta * (r4 + theta1 * r5)));
    }
};

double error_norm(const StateVec& err, const StateVec& y0, const StateVec& y1, double atol,
                  double rtol) {
    double acc = 0.0;
    for (int i = 0; i < 7; ++i) {
        const double sc_re =
            atol + rtol * std::max(std::abs(y0[i].real()), std::abs(y1[i].real()));
        const double sc_im =
            atol + rtol * std::max(std::abs(y0[i].imag()), std::abs(y1[i].imag()));
        const double er = err[i].real() / sc_re;
        const double ei = err[i].imag() / sc_im;
        acc += er * er + ei * ei;
    }
    return std::sqrt(acc / 14.0);
}

// Re-Hermitize rho in place and renormalize its trace; returns the drift.
double project_density(StateVec& y) {
    const Complex c = 0.5 * (y[1] + std::conj(y[2]));
    y[0] = Complex(y[0].real(), 0.0);
    y[3] = Complex(y[3].real(), 0.0);
    y[1] = c;
    y[2] = std::conj(c);
    const double tr = y[0].real() + y[3].real();
    const double drift = std::abs(tr - 1.0);
    if (drift >= 1e-7) {
        throw ToleranceFailure("evolve: trace drift " + std::to_string(drift) +
                               " exceeds 1e-7, integration unreliable");
    }
    y[0] /= tr;
    y[1] /= tr;
    y[2] /= tr;
    y[3] /= tr;
    return drift;
}

} // namespace

Matrix2c master_rhs(const QubitState& state, const MemoryCoefficients& coeffs,
                    const DressedFrame& frame) {
    if (state.frame != Frame::dressed) {
        throw FrameMismatch(std::string("master_rhs: expected dressed state, got ") +
                            frame_name(state.frame));
    }
    const DissipatorWeights w(frame);
    Complex dp, dc, dd, dq;
    master_rhs_elements(w, frame.rabi, state.rho(0, 0), state.rho(0, 1), state.rho(1, 0),
                        state.rho(1, 1), coeffs.gamma1, coeffs.gamma2, coeffs.gamma3, dp, dc, dd,
                        dq);
    Matrix2c out;
    out << dp, dc, dd, dq;
    return out;
}

Trajectory evolve(const QubitState& initial, const SystemParams& params,
                  const EvolutionConfig& config) {
    params.validate();
    config.validate();
    initial.validate();

    const DressedFrame frame = build_dressed_frame(params);
    QubitState start = initial;
    if (start.frame == Frame::bare_rotating) {
        start = rotate_to_dressed(start, frame);
    } else if (start.frame != Frame::dressed) {
        throw FrameMismatch("evolve: initial state must be bare_rotating or dressed");
    }

    const CoupledRhs rhs(params, frame);
    const double hmax = config.resolved_max_step(params, frame);
    const double hmin = 1e-14 * std::max(1.0, config.t_end);

    Trajectory traj;
    traj.params = params;
    traj.frame = frame;
    traj.diagnostics.max_step_used = hmax;
    traj.samples.reserve(config.sample_times.size());

    StateVec y;
    y << start.rho(0, 0), start.rho(0, 1), start.rho(1, 0), start.rho(1, 1), Complex(0.0),
        Complex(0.0), Complex(0.0);

    auto emit = [&](double t, StateVec ys) {
        project_density(ys);
        TrajectorySample s;
        s.t = t;
        s.rho_dressed << ys[0], ys[1], ys[2], ys[3];
        s.memory = MemoryCoefficients{ys[4], ys[5], ys[6], t};
        QubitState q{s.rho_dressed, Frame::dressed, t};
        s.min_eigenvalue = q.min_eigenvalue();
        traj.diagnostics.min_eigenvalue = std::min(traj.diagnostics.min_eigenvalue, s.min_eigenvalue);
        traj.samples.push_back(std::move(s));
    };

    std::size_t next_sample = 0;
    while (next_sample < config.sample_times.size() && config.sample_times[next_sample] <= 0.0) {
        emit(0.0, y);
        ++next_sample;
    }

    double t = 0.0;
    double h = std::min(hmax, config.t_end);
    StateVec k1, k2, k3, k4, k5, k6, k7, ynew, yerr, ytmp;
    rhs(t, y, k1);
    std::size_t consecutive_rejects = 0;

    while (t < config.t_end) {
        bool clipped = false;
        if (t + h >= config.t_end) {
            h = config.t_end - t;
            clipped = true;
        }

        ytmp = y + h * (A21 * k1);
        rhs(t + C2 * h, ytmp, k2);
        ytmp = y + h * (A31 * k1 + A32 * k2);
        rhs(t + C3 * h, ytmp, k3);
        ytmp = y + h * (A41 * k1 + A42 * k2 + A43 * k3);
        rhs(t + C4 * h, ytmp, k4);
        ytmp = y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4);
        rhs(t + C5 * h, ytmp, k5);
        ytmp = y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5);
        rhs(t + h, ytmp, k6);
        ynew = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
        const double tnew = clipped ? config.t_end : t + h;
        rhs(tnew, ynew, k7);
        yerr = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);

        const double err = error_norm(yerr, y, ynew, config.abs_tol, config.rel_tol);
        if (err <= 1.0) {
            // Accepted: dense output for all samples inside (t, tnew].
            if (next_sample < config.sample_times.size() &&
                config.sample_times[next_sample] <= tnew) {
                DenseSegment seg;
                seg.t0 = t;
                seg.h = h;
                const StateVec ydiff = ynew - y;
                const StateVec bspl = h * k1 - ydiff;
                seg.r1 = y;
                seg.r2 = ydiff;
                seg.r3 = bspl;
                seg.r4 = ydiff - h * k7 - bspl;
                seg.r5 = h * (D1 * k1 + D3 * k3 + D4 * k4 + D5 * k5 + D6 * k6 + D7 * k7);
                while (next_sample < config.sample_times.size() &&
                       config.sample_times[next_sample] <= tnew) {
                    const double ts = config.sample_times[next_sample];
                    emit(ts, ts >= tnew ? ynew : seg.eval(ts));
                    ++next_sample;
                }
            }

            t = tnew;
            const double drift = project_density(ynew);
            traj.diagnostics.max_trace_drift = std::max(traj.diagnostics.max_trace_drift, drift);
            y = ynew;
            rhs(t, y, k1);  // re-evaluate after the projection rather than reusing k7
            ++traj.diagnostics.steps;
            consecutive_rejects = 0;

            const double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            h = std::min(h * std::clamp(fac, 0.2, 5.0), hmax);
        } else {
            ++traj.diagnostics.rejected_steps;
            if (++consecutive_rejects > 50) {
                throw ToleranceFailure("evolve: step control failed after 50 rejections at t = " +
                                       std::to_string(t));
            }
            const double fac = 0.9 * std::pow(err, -0.2);
            h *= std::clamp(fac, 0.1, 1.0);
            if (h < hmin) {
                throw ToleranceFailure("evolve: step size underflow at t = " + std::to_string(t));
            }
        }
    }

    traj.diagnostics.positivity_warning = traj.diagnostics.min_eigenvalue < -1e-6;
    return traj;
}

QubitState Trajectory::state_at(std::size_t i, Frame f) const {
    const TrajectorySample& s = samples.at(i);
    QubitState dressed{s.rho_dressed, Frame::dressed, s.t};
    if (f == Frame::dressed) {
        return dressed;
    }
    if (f == Frame::bare_rotating) {
        return rotate_to_bare(dressed, frame);
    }
    throw FrameMismatch("Trajectory::state_at: lab-frame density matrices are not produced here");
}

ConvergenceReport convergence_deviation(const QubitState& initial, const SystemParams& params,
                                        const EvolutionConfig& config) {
    EvolutionConfig fine = config;
    fine.rel_tol = config.rel_tol / 10.0;
    fine.abs_tol = config.abs_tol / 10.0;

    const Trajectory a = evolve(initial, params, config);
    const Trajectory b = evolve(initial, params, fine);

    ConvergenceReport rep;
    rep.rel_tol_coarse = config.rel_tol;
    rep.rel_tol_fine = fine.rel_tol;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        const double drho =
            (a.samples[i].rho_dressed - b.samples[i].rho_dressed).cwiseAbs().maxCoeff();
        const double dmem = std::max({std::abs(a.samples[i].memory.gamma1 - b.samples[i].memory.gamma1),
                                      std::abs(a.samples[i].memory.gamma2 - b.samples[i].memory.gamma2),
                                      std::abs(a.samples[i].memory.gamma3 - b.samples[i].memory.gamma3)});
        rep.max_rho_deviation = std::max(rep.max_rho_deviation, drho);
        rep.max_memory_deviation = std::max(rep.max_memory_deviation, dmem);
    }
    return rep;
}

} // namespace qsync
