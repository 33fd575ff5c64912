// propagator.hpp — right-hand side of the time-local master equation in
// the dressed basis and the adaptive integrator that co-evolves the
// density matrix with the three memory coefficients.

#pragma once

#include <cstddef>
#include <vector>

#include "qsync/bath.hpp"
#include "qsync/dressed.hpp"
#include "qsync/params.hpp"

namespace qsync {

struct EvolutionConfig {
    double t_end = 500.0;
    std::vector<double> sample_times;  // strictly increasing, within [0, t_end]
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    // Upper bound on the step size; <= 0 selects the default
    //   min(0.01 * min(1/delta, 1/(omegaL + delta), 1/lambda), t_end/100)
    // which ties the step to the fastest oscillation in the coefficients.
    double max_step = 0.0;

    double default_max_step(const SystemParams& params, const DressedFrame& frame) const;
    double resolved_max_step(const SystemParams& params, const DressedFrame& frame) const;

    static std::vector<double> uniform_times(double t_end, std::size_t n);

    void validate() const;  // throws ValidationError
};

struct TrajectorySample {
    double t = 0.0;
    Matrix2c rho_dressed = Matrix2c::Zero();
    MemoryCoefficients memory;
    double min_eigenvalue = 0.0;
};

struct EvolutionDiagnostics {
    std::size_t steps = 0;
    std::size_t rejected_steps = 0;
    double max_trace_drift = 0.0;
    double min_eigenvalue = 1.0;     // over all samples
    bool positivity_warning = false; // min eigenvalue < -1e-6 somewhere
    double max_step_used = 0.0;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    SystemParams params;
    DressedFrame frame;
    EvolutionDiagnostics diagnostics;

    // Sample state rotated into the requested frame (dressed or bare_rotating).
    QubitState state_at(std::size_t i, Frame f) const;
};

// d rho/dt in the dressed basis: -(i delta/2)[sigma_z, rho] + D + D^dagger
// with the nine coefficient-weighted sandwich terms of the dissipator D.
// The map is real-linear in rho and traceless by construction.
// Throws FrameMismatch unless state.frame == dressed.
Matrix2c master_rhs(const QubitState& state, const MemoryCoefficients& coeffs,
                    const DressedFrame& frame);

// Integrates (rho, Gamma1, Gamma2, Gamma3) from 0 to t_end with an embedded
// Dormand-Prince 5(4) scheme and emits dense-output samples at
// config.sample_times. The initial state may be given in the bare rotating
// frame (it is rotated into the dressed basis) or directly in the dressed
// frame. rho is re-Hermitized after every accepted step; trace drift is
// renormalized only while |Tr-1| < 1e-7, larger drift is an error.
// Positivity violations below -1e-6 set a warning flag, they are not repaired.
Trajectory evolve(const QubitState& initial, const SystemParams& params,
                  const EvolutionConfig& config);

struct ConvergenceReport {
    double max_rho_deviation = 0.0;     // max elementwise |drho| over samples
    double max_memory_deviation = 0.0;  // same for the Gamma coefficients
    double rel_tol_coarse = 0.0;
    double rel_tol_fine = 0.0;
};

// Runs evolve at (tol, tol/10) and reports the maximum deviation over the
// shared sample times; used by the acceptance suite as a self-convergence
// check.
ConvergenceReport convergence_deviation(const QubitState& initial, const SystemParams& params,
                                        const EvolutionConfig& config);

} // namespace qsync
