#include "qsync/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "qsync/version.hpp"

namespace qsync {

const char* axis_name(SweepAxisName a) {
    switch (a) {
        case SweepAxisName::delta: return "delta";
        case SweepAxisName::epsilon: return "epsilon";
        case SweepAxisName::gamma: return "gamma";
    }
    return "unknown";
}

SweepAxisName axis_from_name(const std::string& name) {
    if (name == "delta") return SweepAxisName::delta;
    if (name == "epsilon") return SweepAxisName::epsilon;
    if (name == "gamma") return SweepAxisName::gamma;
    throw ValidationError("sweep axis must be one of delta, epsilon, gamma; got '" + name + "'");
}

double SweepAxis::value(std::size_t i) const {
    if (n_points == 1) {
        return min;
    }
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(n_points - 1);
}

SystemParams SweepSpec::cell_params(std::size_t i, std::size_t j) const {
    SystemParams p = fixed;
    auto apply = [&p](SweepAxisName name, double v) {
        switch (name) {
            case SweepAxisName::delta: p.delta = v; break;
            case SweepAxisName::epsilon: p.epsilon = v; break;
            case SweepAxisName::gamma: p.gamma = v; break;
        }
    };
    apply(axis1.name, axis1.value(i));
    apply(axis2.name, axis2.value(j));
    return p;
}

void SweepSpec::validate() const {
    if (axis1.name == axis2.name) {
        throw ValidationError("SweepSpec: axis names must be distinct");
    }
    for (const SweepAxis* ax : {&axis1, &axis2}) {
        if (ax->n_points < 1) {
            throw ValidationError("SweepSpec: n_points >= 1 required");
        }
        if (!std::isfinite(ax->min) || !std::isfinite(ax->max)) {
            throw ValidationError("SweepSpec: axis range must be finite");
        }
        if (ax->n_points > 1 && !(ax->max > ax->min)) {
            throw ValidationError("SweepSpec: axis max must exceed min");
        }
    }
    evolution.validate();
    if (std::find(evolution.sample_times.begin(), evolution.sample_times.end(), t_eval) ==
        evolution.sample_times.end()) {
        throw ValidationError("SweepSpec: t_eval must be one of the sample_times");
    }
}

std::size_t SweepGrid::failed_cells() const {
    std::size_t n = 0;
    for (const auto& c : cells) {
        if (c.failed) ++n;
    }
    return n;
}

SweepGrid run_sweep(const SweepSpec& spec, const QubitState& initial, unsigned threads) {
    spec.validate();
    initial.validate();

    const std::size_t n1 = spec.axis1.n_points;
    const std::size_t n2 = spec.axis2.n_points;
    const std::size_t total = n1 * n2;

    SweepGrid grid;
    grid.spec = spec;
    grid.values.assign(total, std::numeric_limits<double>::quiet_NaN());
    grid.cells.assign(total, CellDiagnostics{});
    grid.omega0_used = spec.fixed.omega0;
    grid.version = version_string();

    const std::size_t eval_index = [&] {
        const auto& st = spec.evolution.sample_times;
        return static_cast<std::size_t>(
            std::find(st.begin(), st.end(), spec.t_eval) - st.begin());
    }();

    auto run_cell = [&](std::size_t idx) {
        const std::size_t i = idx / n2;
        const std::size_t j = idx % n2;
        CellDiagnostics& diag = grid.cells[idx];
        try {
            const SystemParams p = spec.cell_params(i, j);
            diag.regime = p.regime();
            const Trajectory traj = evolve(initial, p, spec.evolution);
            diag.positivity_warning = traj.diagnostics.positivity_warning;
            diag.steps = traj.diagnostics.steps;
            const QubitState bare = traj.state_at(eval_index, Frame::bare_rotating);
            const double v = s_max(bare).value;
            if (v < 0.0 || v > 0.125 + 1e-9) {
                throw IntegrationFailure("cell S_m = " + std::to_string(v) +
                                         " outside [0, 1/8], state unphysical");
            }
            grid.values[idx] = v;
        } catch (const Error& e) {
            diag.failed = true;
            diag.error = e.what();
        }
    };

    unsigned n_threads = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
    n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, total));

    if (n_threads <= 1) {
        for (std::size_t idx = 0; idx < total; ++idx) {
            run_cell(idx);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned w = 0; w < n_threads; ++w) {
            pool.emplace_back([&] {
                for (std::size_t idx = next.fetch_add(1); idx < total; idx = next.fetch_add(1)) {
                    run_cell(idx);
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    return grid;
}

TongueMask tongue_mask(const SweepGrid& grid, double threshold) {
    if (!(threshold > 0.0) || !(threshold < 0.125)) {
        throw ValidationError("tongue_mask: threshold must lie in (0, 1/8)");
    }
    const std::size_t n1 = grid.spec.axis1.n_points;
    const std::size_t n2 = grid.spec.axis2.n_points;

    TongueMask m;
    m.n1 = n1;
    m.n2 = n2;
    m.mask.assign(n1 * n2, 0);
    m.component.assign(n1 * n2, -1);
    for (std::size_t k = 0; k < n1 * n2; ++k) {
        const double v = grid.values[k];
        m.mask[k] = (!std::isnan(v) && v >= threshold) ? 1 : 0;
    }

    // 4-connected component labelling by flood fill.
    int next_id = 0;
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < n1 * n2; ++start) {
        if (m.mask[start] == 0 || m.component[start] >= 0) {
            continue;
        }
        const int id = next_id++;
        std::size_t size = 0;
        stack.push_back(start);
        m.component[start] = id;
        while (!stack.empty()) {
            const std::size_t k = stack.back();
            stack.pop_back();
            ++size;
            const std::size_t i = k / n2;
            const std::size_t j = k % n2;
            auto visit = [&](std::size_t kk) {
                if (m.mask[kk] != 0 && m.component[kk] < 0) {
                    m.component[kk] = id;
                    stack.push_back(kk);
                }
            };
            if (i > 0) visit(k - n2);
            if (i + 1 < n1) visit(k + n2);
            if (j > 0) visit(k - 1);
            if (j + 1 < n2) visit(k + 1);
        }
        if (size > m.largest_component_size) {
            m.largest_component_size = size;
            m.largest_component_id = id;
        }
    }
    return m;
}

} // namespace qsync
