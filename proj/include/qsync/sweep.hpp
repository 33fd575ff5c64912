// sweep.hpp — parameter-grid engine for S_m maps over (delta, epsilon)
// or (epsilon, gamma) planes, plus threshold masks for tongue analysis.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsync/observables.hpp"
#include "qsync/propagator.hpp"

namespace qsync {

enum class SweepAxisName { delta, epsilon, gamma };

const char* axis_name(SweepAxisName a);
SweepAxisName axis_from_name(const std::string& name);  // throws ValidationError

struct SweepAxis {
    SweepAxisName name = SweepAxisName::delta;
    double min = 0.0;
    double max = 0.0;
    std::size_t n_points = 1;

    double value(std::size_t i) const;
};

struct SweepSpec {
    SweepAxis axis1;  // rows of the result grid
    SweepAxis axis2;  // columns
    SystemParams fixed;
    double t_eval = 500.0;
    EvolutionConfig evolution;  // sample_times must contain t_eval

    SystemParams cell_params(std::size_t i, std::size_t j) const;
    void validate() const;
};

struct CellDiagnostics {
    bool failed = false;
    std::string error;
    Regime regime = Regime::markov;
    bool positivity_warning = false;
    std::size_t steps = 0;
};

struct SweepGrid {
    SweepSpec spec;
    std::vector<double> values;  // row-major n1 x n2; NaN marks a failed cell
    std::vector<CellDiagnostics> cells;
    double omega0_used = 0.0;
    std::string version;

    double at(std::size_t i, std::size_t j) const { return values[i * spec.axis2.n_points + j]; }
    const CellDiagnostics& cell(std::size_t i, std::size_t j) const {
        return cells[i * spec.axis2.n_points + j];
    }
    std::size_t failed_cells() const;
};

// Evaluates S_m at t_eval (bare rotating frame) for every grid cell.
// Cells are independent tasks written to preassigned slots, so the result
// is bit-identical regardless of thread count; a failing cell records its
// error and yields NaN instead of aborting the sweep. threads = 0 picks
// the hardware concurrency.
SweepGrid run_sweep(const SweepSpec& spec, const QubitState& initial, unsigned threads = 0);

struct TongueMask {
    std::size_t n1 = 0, n2 = 0;
    std::vector<std::uint8_t> mask;        // 1 where S_m >= threshold
    std::vector<int> component;            // 4-connected component id, -1 where mask = 0
    std::size_t largest_component_size = 0;
    int largest_component_id = -1;

    bool at(std::size_t i, std::size_t j) const { return mask[i * n2 + j] != 0; }
    int component_at(std::size_t i, std::size_t j) const { return component[i * n2 + j]; }
};

// Threshold must lie in (0, 1/8). Failed (NaN) cells are masked out.
TongueMask tongue_mask(const SweepGrid& grid, double threshold);

} // namespace qsync
