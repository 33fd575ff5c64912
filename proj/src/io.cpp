#include "qsync/io.hpp"

#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace qsync {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_metadata_csv(std::ostream& os, const KeyValueList& meta) {
    for (const auto& [k, v] : meta) {
        os << "# " << k << " = " << v << "\n";
    }
}

namespace {

nlohmann::ordered_json metadata_json(const KeyValueList& meta) {
    nlohmann::ordered_json j;
    for (const auto& [k, v] : meta) {
        j[k] = v;
    }
    return j;
}

struct TrajectoryRow {
    double t, rho11, re10, im10, rho00, abs10;
    Complex g1, g2, g3;
};

TrajectoryRow trajectory_row(const Trajectory& traj, std::size_t i, Frame frame) {
    const QubitState s = traj.state_at(i, frame);
    TrajectoryRow r;
    r.t = s.time;
    r.rho11 = s.rho(0, 0).real();
    r.re10 = s.rho(0, 1).real();
    r.im10 = s.rho(0, 1).imag();
    r.rho00 = s.rho(1, 1).real();
    r.abs10 = std::abs(s.rho(0, 1));
    r.g1 = traj.samples[i].memory.gamma1;
    r.g2 = traj.samples[i].memory.gamma2;
    r.g3 = traj.samples[i].memory.gamma3;
    return r;
}

} // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, Frame observable_frame,
                          const KeyValueList& meta) {
    write_metadata_csv(os, meta);
    os << "t,rho11,re_rho10,im_rho10,rho00,abs_rho10,"
          "re_gamma1,im_gamma1,re_gamma2,im_gamma2,re_gamma3,im_gamma3\n";
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const TrajectoryRow r = trajectory_row(traj, i, observable_frame);
        os << fmt17(r.t) << ',' << fmt17(r.rho11) << ',' << fmt17(r.re10) << ',' << fmt17(r.im10)
           << ',' << fmt17(r.rho00) << ',' << fmt17(r.abs10) << ',' << fmt17(r.g1.real()) << ','
           << fmt17(r.g1.imag()) << ',' << fmt17(r.g2.real()) << ',' << fmt17(r.g2.imag()) << ','
           << fmt17(r.g3.real()) << ',' << fmt17(r.g3.imag()) << "\n";
    }
}

void write_trajectory_json(std::ostream& os, const Trajectory& traj, Frame observable_frame,
                           const KeyValueList& meta) {
    nlohmann::ordered_json j;
    j["metadata"] = metadata_json(meta);
    j["columns"] = {"t", "rho11", "re_rho10", "im_rho10", "rho00", "abs_rho10",
                    "re_gamma1", "im_gamma1", "re_gamma2", "im_gamma2", "re_gamma3", "im_gamma3"};
    auto& data = j["data"];
    data = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const TrajectoryRow r = trajectory_row(traj, i, observable_frame);
        data.push_back({r.t, r.rho11, r.re10, r.im10, r.rho00, r.abs10, r.g1.real(), r.g1.imag(),
                        r.g2.real(), r.g2.imag(), r.g3.real(), r.g3.imag()});
    }
    os << j.dump(2) << "\n";
}

void write_qgrid_csv(std::ostream& os, const QGrid& grid, const KeyValueList& meta) {
    write_metadata_csv(os, meta);
    os << "theta,phi,q,time\n";
    const std::string t = fmt17(grid.time);
    for (std::size_t i = 0; i < grid.theta_axis.size(); ++i) {
        for (std::size_t j = 0; j < grid.phi_axis.size(); ++j) {
            os << fmt17(grid.theta_axis[i]) << ',' << fmt17(grid.phi_axis[j]) << ','
               << fmt17(grid.at(i, j)) << ',' << t << "\n";
        }
    }
}

void write_qgrid_json(std::ostream& os, const QGrid& grid, const KeyValueList& meta) {
    nlohmann::ordered_json j;
    j["metadata"] = metadata_json(meta);
    j["time"] = grid.time;
    j["theta"] = grid.theta_axis;
    j["phi"] = grid.phi_axis;
    auto& rows = j["q"];
    rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < grid.theta_axis.size(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (std::size_t k = 0; k < grid.phi_axis.size(); ++k) {
            row.push_back(grid.at(i, k));
        }
        rows.push_back(std::move(row));
    }
    os << j.dump(2) << "\n";
}

void write_sweep_csv(std::ostream& os, const SweepGrid& grid, const KeyValueList& meta) {
    write_metadata_csv(os, meta);
    os << axis_name(grid.spec.axis1.name) << ',' << axis_name(grid.spec.axis2.name) << ",s_max\n";
    const std::size_t n1 = grid.spec.axis1.n_points;
    const std::size_t n2 = grid.spec.axis2.n_points;
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            os << fmt17(grid.spec.axis1.value(i)) << ',' << fmt17(grid.spec.axis2.value(j)) << ','
               << fmt17(grid.at(i, j)) << "\n";
        }
    }
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            const CellDiagnostics& c = grid.cell(i, j);
            if (c.failed) {
                os << "# cell_error," << i << ',' << j << ',' << c.error << "\n";
            }
        }
    }
}

void write_sweep_json(std::ostream& os, const SweepGrid& grid, const KeyValueList& meta) {
    nlohmann::ordered_json j;
    j["metadata"] = metadata_json(meta);
    j["axis1"] = {{"name", axis_name(grid.spec.axis1.name)},
                  {"min", grid.spec.axis1.min},
                  {"max", grid.spec.axis1.max},
                  {"n_points", grid.spec.axis1.n_points}};
    j["axis2"] = {{"name", axis_name(grid.spec.axis2.name)},
                  {"min", grid.spec.axis2.min},
                  {"max", grid.spec.axis2.max},
                  {"n_points", grid.spec.axis2.n_points}};
    j["t_eval"] = grid.spec.t_eval;
    j["omega0"] = grid.omega0_used;
    j["version"] = grid.version;
    auto& rows = j["s_max"];
    rows = nlohmann::ordered_json::array();
    const std::size_t n1 = grid.spec.axis1.n_points;
    const std::size_t n2 = grid.spec.axis2.n_points;
    for (std::size_t i = 0; i < n1; ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (std::size_t k = 0; k < n2; ++k) {
            const double v = grid.at(i, k);
            if (std::isnan(v)) {
                row.push_back(nullptr);
            } else {
                row.push_back(v);
            }
        }
        rows.push_back(std::move(row));
    }
    auto& cells = j["cells"];
    cells = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t k = 0; k < n2; ++k) {
            const CellDiagnostics& c = grid.cell(i, k);
            nlohmann::ordered_json cj = {{"i", i},
                                         {"j", k},
                                         {"regime", regime_name(c.regime)},
                                         {"steps", c.steps},
                                         {"positivity_warning", c.positivity_warning}};
            if (c.failed) {
                cj["error"] = c.error;
            }
            cells.push_back(std::move(cj));
        }
    }
    os << j.dump(2) << "\n";
}

void write_lab_trajectory_csv(std::ostream& os, const std::vector<LabSample>& points,
                              const TrajectoryClass& cls, const KeyValueList& meta) {
    write_metadata_csv(os, meta);
    os << "# verdict = " << verdict_name(cls.verdict) << "\n";
    os << "# recurrence_distance = " << fmt17(cls.recurrence_distance) << "\n";
    if (cls.period) {
        os << "# period_estimate = " << fmt17(*cls.period) << "\n";
    }
    os << "# transient_cut = " << fmt17(cls.transient_cut) << "\n";
    os << "t,mx,my,mz,mxp,myp,mzp\n";
    for (const LabSample& s : points) {
        os << fmt17(s.t) << ',' << fmt17(s.rotating.x) << ',' << fmt17(s.rotating.y) << ','
           << fmt17(s.rotating.z) << ',' << fmt17(s.lab.x) << ',' << fmt17(s.lab.y) << ','
           << fmt17(s.lab.z) << "\n";
    }
}

void write_lab_trajectory_json(std::ostream& os, const std::vector<LabSample>& points,
                               const TrajectoryClass& cls, const KeyValueList& meta) {
    nlohmann::ordered_json j;
    j["metadata"] = metadata_json(meta);
    j["classification"] = {{"verdict", verdict_name(cls.verdict)},
                           {"recurrence_distance", cls.recurrence_distance},
                           {"transient_cut", cls.transient_cut}};
    if (cls.period) {
        j["classification"]["period_estimate"] = *cls.period;
    }
    j["columns"] = {"t", "mx", "my", "mz", "mxp", "myp", "mzp"};
    auto& data = j["data"];
    data = nlohmann::ordered_json::array();
    for (const LabSample& s : points) {
        data.push_back({s.t, s.rotating.x, s.rotating.y, s.rotating.z, s.lab.x, s.lab.y, s.lab.z});
    }
    os << j.dump(2) << "\n";
}

} // namespace qsync
