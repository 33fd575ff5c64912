// limit_cycle.hpp — lab-frame Bloch trajectory construction and
// recurrence-based classification into fixed point / limit cycle.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qsync/observables.hpp"
#include "qsync/propagator.hpp"

namespace qsync {

struct LabSample {
    double t = 0.0;
    BlochVector rotating;  // bare rotating frame
    BlochVector lab;
};

// Rotates n_samples uniformly chosen trajectory samples to the bare frame,
// maps them to Bloch vectors and applies the lab-frame rotation at omegaL.
// Throws AliasingError when the sample spacing violates omegaL*dt <= pi/8.
std::vector<LabSample> lab_trajectory(const Trajectory& traj, std::size_t n_samples);

enum class Verdict { fixed_point, limit_cycle, undecided };

const char* verdict_name(Verdict v);

struct TrajectoryClass {
    Verdict verdict = Verdict::undecided;
    double recurrence_distance = 0.0;
    std::optional<double> period;  // set for limit_cycle
    double transient_cut = 0.0;    // time discarded from the start
};

struct ClassifyOptions {
    double eps_fp = 1e-3;        // fixed-point diameter, Bloch-ball units
    double eps_rec = 1e-2;       // recurrence distance
    double transient_cut = -1.0; // < 0: use half the span
};

// Verdict rules over the final `window` of the post-transient curve:
//  - fixed_point when the maximum pairwise distance stays below eps_fp;
//  - limit_cycle when every final-window point recurs to an earlier
//    post-transient point within eps_rec at a consistent lag (median lag
//    becomes the period estimate, relative spread below 10%);
//  - undecided otherwise.
// Throws InsufficientData unless the post-transient span covers 3*window.
TrajectoryClass classify(const std::vector<LabSample>& points, double window,
                         const ClassifyOptions& options = {});

} // namespace qsync
