// io.hpp — CSV/JSON serialization of trajectories, Q-grids and sweep
// grids. Numbers are written with 17 significant digits so that output
// files are bit-stable regression baselines.

#pragma once

#include <iosfwd>
#include <string>

#include "qsync/config.hpp"
#include "qsync/limit_cycle.hpp"
#include "qsync/observables.hpp"
#include "qsync/propagator.hpp"
#include "qsync/sweep.hpp"

namespace qsync {

std::string fmt17(double v);

void write_metadata_csv(std::ostream& os, const KeyValueList& meta);

// Columns: t, rho11, re_rho10, im_rho10, rho00, abs_rho10, and the three
// memory coefficients; rho elements in the requested observable frame.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, Frame observable_frame,
                          const KeyValueList& meta);
void write_trajectory_json(std::ostream& os, const Trajectory& traj, Frame observable_frame,
                           const KeyValueList& meta);

// Columns: theta, phi, q, time.
void write_qgrid_csv(std::ostream& os, const QGrid& grid, const KeyValueList& meta);
void write_qgrid_json(std::ostream& os, const QGrid& grid, const KeyValueList& meta);

// Columns: axis1, axis2, s_max. Failed cells serialize as nan plus a
// trailing "# cell_error" diagnostic row each.
void write_sweep_csv(std::ostream& os, const SweepGrid& grid, const KeyValueList& meta);
void write_sweep_json(std::ostream& os, const SweepGrid& grid, const KeyValueList& meta);

// Columns: t, mx, my, mz, mxp, myp, mzp (rotating and lab frames).
void write_lab_trajectory_csv(std::ostream& os, const std::vector<LabSample>& points,
                              const TrajectoryClass& cls, const KeyValueList& meta);
void write_lab_trajectory_json(std::ostream& os, const std::vector<LabSample>& points,
                               const TrajectoryClass& cls, const KeyValueList& meta);

} // namespace qsync
