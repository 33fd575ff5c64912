#include "qsync/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "qsync/io.hpp"
#include "qsync/limit_cycle.hpp"
#include "qsync/observables.hpp"
#include "qsync/sweep.hpp"
#include "qsync/version.hpp"

namespace qsync {

const char* command_name(Command c) {
    switch (c) {
        case Command::evolve: return "evolve";
        case Command::qfunc: return "qfunc";
        case Command::sweep: return "sweep";
        case Command::trajectory: return "trajectory";
    }
    return "unknown";
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value, int line) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError("invalid number for key '" + key + "': '" + value + "'", line);
    }
}

std::size_t parse_size(const std::string& key, const std::string& value, int line) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size() || v < 0) throw std::invalid_argument("bad");
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw ParseError("invalid integer for key '" + key + "': '" + value + "'", line);
    }
}

Frame parse_frame(const std::string& key, const std::string& value, int line) {
    if (value == "bare" || value == "bare_rotating") return Frame::bare_rotating;
    if (value == "dressed") return Frame::dressed;
    throw ParseError("invalid frame for key '" + key + "' (expected bare or dressed)", line);
}

void apply_preset(RunConfig& cfg, const std::string& name, int line) {
    if (name == "markov") {
        cfg.params = markov_preset();
    } else if (name == "nonmarkov") {
        cfg.params = nonmarkov_preset();
    } else {
        throw ParseError("unknown preset '" + name + "'", line);
    }
    cfg.preset = name;
    cfg.t_end = 500.0;
    cfg.t_eval = 500.0;
}

// Applies one key to the config; line is used for error reporting only.
void apply_key(RunConfig& cfg, const std::string& key, const std::string& value, int line) {
    if (key == "command") {
        if (value == "evolve") cfg.command = Command::evolve;
        else if (value == "qfunc") cfg.command = Command::qfunc;
        else if (value == "sweep") cfg.command = Command::sweep;
        else if (value == "trajectory") cfg.command = Command::trajectory;
        else throw ParseError("unknown command '" + value + "'", line);
    } else if (key == "preset") {
        apply_preset(cfg, value, line);
    } else if (key == "delta") {
        cfg.params.delta = parse_double(key, value, line);
    } else if (key == "epsilon") {
        cfg.params.epsilon = parse_double(key, value, line);
    } else if (key == "gamma") {
        cfg.params.gamma = parse_double(key, value, line);
    } else if (key == "lambda") {
        cfg.params.lambda = parse_double(key, value, line);
    } else if (key == "omega0") {
        cfg.params.omega0 = parse_double(key, value, line);
    } else if (key == "t_end") {
        cfg.t_end = parse_double(key, value, line);
    } else if (key == "rel_tol") {
        cfg.rel_tol = parse_double(key, value, line);
    } else if (key == "abs_tol") {
        cfg.abs_tol = parse_double(key, value, line);
    } else if (key == "max_step") {
        cfg.max_step = parse_double(key, value, line);
    } else if (key == "samples") {
        cfg.samples = parse_size(key, value, line);
    } else if (key == "initial_bloch") {
        std::istringstream ss(value);
        std::string part;
        double m[3];
        for (double& mi : m) {
            if (!std::getline(ss, part, ';')) {
                throw ParseError("initial_bloch expects 'mx;my;mz'", line);
            }
            mi = parse_double(key, trim(part), line);
        }
        if (std::getline(ss, part, ';')) {
            throw ParseError("initial_bloch expects exactly three components", line);
        }
        std::copy(m, m + 3, cfg.initial_bloch);
    } else if (key == "initial_frame") {
        cfg.initial_frame = parse_frame(key, value, line);
    } else if (key == "observable_frame") {
        cfg.observable_frame = parse_frame(key, value, line);
    } else if (key == "time") {
        cfg.qfunc_time = parse_double(key, value, line);
    } else if (key == "ntheta") {
        cfg.n_theta = parse_size(key, value, line);
    } else if (key == "nphi") {
        cfg.n_phi = parse_size(key, value, line);
    } else if (key == "grid") {
        cfg.grid = value;
    } else if (key == "t_eval") {
        cfg.t_eval = parse_double(key, value, line);
    } else if (key == "threshold") {
        cfg.threshold = parse_double(key, value, line);
    } else if (key == "threads") {
        cfg.threads = static_cast<unsigned>(parse_size(key, value, line));
    } else if (key == "n_samples") {
        cfg.n_samples = parse_size(key, value, line);
    } else if (key == "window") {
        cfg.window = parse_double(key, value, line);
    } else if (key == "eps_fp") {
        cfg.eps_fp = parse_double(key, value, line);
    } else if (key == "eps_rec") {
        cfg.eps_rec = parse_double(key, value, line);
    } else if (key == "out") {
        cfg.out = value;
    } else if (key == "format") {
        if (value != "csv" && value != "json") {
            throw ParseError("format must be csv or json", line);
        }
        cfg.format = value;
    } else {
        throw ParseError("unknown key '" + key + "'", line);
    }
}

SweepSpec parse_grid_spec(const RunConfig& cfg) {
    // "name:min:max:n,name:min:max:n"
    const auto parse_axis = [](const std::string& text) {
        std::istringstream ss(text);
        std::string name, smin, smax, sn;
        if (!std::getline(ss, name, ':') || !std::getline(ss, smin, ':') ||
            !std::getline(ss, smax, ':') || !std::getline(ss, sn)) {
            throw ValidationError("grid axis must be name:min:max:n, got '" + text + "'");
        }
        SweepAxis ax;
        ax.name = axis_from_name(trim(name));
        try {
            ax.min = std::stod(smin);
            ax.max = std::stod(smax);
            const long long n = std::stoll(sn);
            if (n < 1) throw std::invalid_argument("n");
            ax.n_points = static_cast<std::size_t>(n);
        } catch (const std::exception&) {
            throw ValidationError("invalid grid axis numbers in '" + text + "'");
        }
        return ax;
    };

    const auto comma = cfg.grid.find(',');
    if (comma == std::string::npos) {
        throw ValidationError("grid must contain two comma-separated axes");
    }
    SweepSpec spec;
    spec.axis1 = parse_axis(cfg.grid.substr(0, comma));
    spec.axis2 = parse_axis(cfg.grid.substr(comma + 1));
    spec.fixed = cfg.params;
    spec.t_eval = cfg.t_eval;
    spec.evolution.t_end = cfg.t_eval;
    spec.evolution.sample_times = {cfg.t_eval};
    spec.evolution.rel_tol = cfg.rel_tol;
    spec.evolution.abs_tol = cfg.abs_tol;
    spec.evolution.max_step = cfg.max_step;
    return spec;
}

} // namespace

EvolutionConfig RunConfig::evolution_config() const {
    EvolutionConfig ec;
    ec.t_end = t_end;
    ec.sample_times = EvolutionConfig::uniform_times(t_end, std::max<std::size_t>(samples, 2));
    ec.rel_tol = rel_tol;
    ec.abs_tol = abs_tol;
    ec.max_step = max_step;
    return ec;
}

QubitState RunConfig::initial_state() const {
    QubitState s =
        state_from_bloch(initial_bloch[0], initial_bloch[1], initial_bloch[2], initial_frame);
    s.validate();
    return s;
}

void RunConfig::validate() const {
    params.validate();
    if (!(t_end > 0.0)) {
        throw ValidationError("t_end must be > 0");
    }
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
        throw ValidationError("tolerances must be > 0");
    }
    if (samples < 2) {
        throw ValidationError("samples must be >= 2");
    }
    if (format != "csv" && format != "json") {
        throw ValidationError("format must be csv or json");
    }
    const double norm = std::sqrt(initial_bloch[0] * initial_bloch[0] +
                                  initial_bloch[1] * initial_bloch[1] +
                                  initial_bloch[2] * initial_bloch[2]);
    if (norm > 1.0 + 1e-9) {
        throw ValidationError("initial Bloch vector must satisfy |m| <= 1");
    }
    if (initial_frame == Frame::lab || observable_frame == Frame::lab) {
        throw ValidationError("initial/observable frame must be bare or dressed");
    }
    if (command == Command::qfunc) {
        if (qfunc_time < 0.0 || qfunc_time > t_end) {
            throw ValidationError("qfunc time must lie in [0, t_end]");
        }
        if (n_theta < 3 || n_phi < 4) {
            throw ValidationError("qfunc grid too small");
        }
    }
    if (command == Command::sweep) {
        if (!(t_eval > 0.0)) {
            throw ValidationError("t_eval must be > 0");
        }
        if (!(threshold > 0.0) || !(threshold < 0.125)) {
            throw ValidationError("threshold must lie in (0, 1/8)");
        }
    }
    if (command == Command::trajectory) {
        if (n_samples < 2) {
            throw ValidationError("n_samples must be >= 2");
        }
    }
}

std::string RunConfig::serialize() const {
    std::ostringstream os;
    os << "command = " << command_name(command) << "\n";
    if (!preset.empty()) {
        os << "preset = " << preset << "\n";
    }
    os << "delta = " << fmt17(params.delta) << "\n";
    os << "epsilon = " << fmt17(params.epsilon) << "\n";
    os << "gamma = " << fmt17(params.gamma) << "\n";
    os << "lambda = " << fmt17(params.lambda) << "\n";
    os << "omega0 = " << fmt17(params.omega0) << "\n";
    os << "t_end = " << fmt17(t_end) << "\n";
    os << "rel_tol = " << fmt17(rel_tol) << "\n";
    os << "abs_tol = " << fmt17(abs_tol) << "\n";
    os << "max_step = " << fmt17(max_step) << "\n";
    os << "samples = " << samples << "\n";
    os << "initial_bloch = " << fmt17(initial_bloch[0]) << ';' << fmt17(initial_bloch[1]) << ';'
       << fmt17(initial_bloch[2]) << "\n";
    os << "initial_frame = " << (initial_frame == Frame::dressed ? "dressed" : "bare") << "\n";
    os << "observable_frame = " << (observable_frame == Frame::dressed ? "dressed" : "bare")
       << "\n";
    os << "time = " << fmt17(qfunc_time) << "\n";
    os << "ntheta = " << n_theta << "\n";
    os << "nphi = " << n_phi << "\n";
    os << "grid = " << grid << "\n";
    os << "t_eval = " << fmt17(t_eval) << "\n";
    os << "threshold = " << fmt17(threshold) << "\n";
    os << "threads = " << threads << "\n";
    os << "n_samples = " << n_samples << "\n";
    os << "window = " << fmt17(window) << "\n";
    os << "eps_fp = " << fmt17(eps_fp) << "\n";
    os << "eps_rec = " << fmt17(eps_rec) << "\n";
    os << "out = " << out << "\n";
    os << "format = " << format << "\n";
    return os.str();
}

KeyValueList RunConfig::metadata() const {
    KeyValueList meta;
    std::istringstream ss(serialize());
    std::string line;
    while (std::getline(ss, line)) {
        const auto eq = line.find(" = ");
        // The output path does not influence the content; keeping it out
        // makes files from identical runs byte-identical.
        if (line.substr(0, eq) == "out") {
            continue;
        }
        meta.emplace_back(line.substr(0, eq), line.substr(eq + 3));
    }
    meta.emplace_back("info.version", version_string());
    meta.emplace_back("info.omega_laser", fmt17(params.omega_laser()));
    meta.emplace_back("info.regime", regime_name(params.regime()));
    return meta;
}

RunConfig parse_config(const std::string& file_text, const KeyValueList& overrides) {
    // Collect file keys first so a preset (from flag or file) expands before
    // everything else.
    std::vector<std::pair<KeyValue, int>> file_keys;
    std::istringstream ss(file_text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        const std::string text = trim(line);
        if (text.empty()) {
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw ParseError("expected 'key = value'", line_no);
        }
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty()) {
            throw ParseError("empty key", line_no);
        }
        file_keys.push_back({{key, value}, line_no});
    }

    RunConfig cfg;

    // Preset: last flag occurrence wins over the last file occurrence.
    std::string preset;
    int preset_line = 0;
    for (const auto& [kv, ln] : file_keys) {
        if (kv.first == "preset") {
            preset = kv.second;
            preset_line = ln;
        }
    }
    for (const auto& kv : overrides) {
        if (kv.first == "preset") {
            preset = kv.second;
            preset_line = 0;
        }
    }
    if (!preset.empty()) {
        apply_preset(cfg, preset, preset_line);
    }

    for (const auto& [kv, ln] : file_keys) {
        if (kv.first != "preset") {
            apply_key(cfg, kv.first, kv.second, ln);
        }
    }
    for (const auto& kv : overrides) {
        if (kv.first != "preset") {
            apply_key(cfg, kv.first, kv.second, 0);
        }
    }

    cfg.validate();
    return cfg;
}

namespace {

void write_output(const RunConfig& cfg, const std::function<void(std::ostream&)>& writer,
                  std::ostream& log) {
    if (cfg.out == "-") {
        writer(log);
        return;
    }
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) {
        throw IoError("cannot open output file '" + cfg.out + "'");
    }
    writer(file);
    file.flush();
    if (!file) {
        throw IoError("failed while writing '" + cfg.out + "'");
    }
}

} // namespace

void run(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const KeyValueList meta = cfg.metadata();

    switch (cfg.command) {
        case Command::evolve: {
            Trajectory traj;
            try {
                traj = evolve(cfg.initial_state(), cfg.params, cfg.evolution_config());
            } catch (const ToleranceFailure& e) {
                throw IntegrationFailure(e.what());
            }
            KeyValueList emeta = meta;
            emeta.emplace_back("info.steps", std::to_string(traj.diagnostics.steps));
            emeta.emplace_back("info.min_eigenvalue", fmt17(traj.diagnostics.min_eigenvalue));
            emeta.emplace_back("info.positivity_warning",
                               traj.diagnostics.positivity_warning ? "true" : "false");
            write_output(cfg, [&](std::ostream& os) {
                if (cfg.format == "csv") {
                    write_trajectory_csv(os, traj, cfg.observable_frame, emeta);
                } else {
                    write_trajectory_json(os, traj, cfg.observable_frame, emeta);
                }
            }, log);
            break;
        }
        case Command::qfunc: {
            QubitState state = cfg.initial_state();
            if (cfg.qfunc_time > 0.0) {
                EvolutionConfig ec = cfg.evolution_config();
                ec.t_end = cfg.qfunc_time;
                ec.sample_times = {cfg.qfunc_time};
                Trajectory traj;
                try {
                    traj = evolve(state, cfg.params, ec);
                } catch (const ToleranceFailure& e) {
                    throw IntegrationFailure(e.what());
                }
                state = traj.state_at(0, cfg.observable_frame);
            } else if (state.frame != cfg.observable_frame) {
                const DressedFrame frame = build_dressed_frame(cfg.params);
                state = state.frame == Frame::bare_rotating ? rotate_to_dressed(state, frame)
                                                            : rotate_to_bare(state, frame);
            }
            const QGrid grid = husimi_grid(state, cfg.n_theta, cfg.n_phi);
            write_output(cfg, [&](std::ostream& os) {
                if (cfg.format == "csv") {
                    write_qgrid_csv(os, grid, meta);
                } else {
                    write_qgrid_json(os, grid, meta);
                }
            }, log);
            break;
        }
        case Command::sweep: {
            const SweepSpec spec = parse_grid_spec(cfg);
            const SweepGrid grid = run_sweep(spec, cfg.initial_state(), cfg.threads);
            write_output(cfg, [&](std::ostream& os) {
                if (cfg.format == "csv") {
                    write_sweep_csv(os, grid, meta);
                } else {
                    write_sweep_json(os, grid, meta);
                }
            }, log);
            break;
        }
        case Command::trajectory: {
            EvolutionConfig ec = cfg.evolution_config();
            // Rotation-resolving sample density for the lab-frame transform.
            const double omega_l = cfg.params.omega_laser();
            const std::size_t needed = static_cast<std::size_t>(
                std::ceil(cfg.t_end * omega_l * 8.0 / 3.141592653589793)) + 2;
            if (ec.sample_times.size() < needed) {
                ec.sample_times = EvolutionConfig::uniform_times(cfg.t_end, needed);
            }
            Trajectory traj;
            try {
                traj = evolve(cfg.initial_state(), cfg.params, ec);
            } catch (const ToleranceFailure& e) {
                throw IntegrationFailure(e.what());
            }
            const std::size_t n = std::min(cfg.n_samples, traj.samples.size());
            const std::vector<LabSample> points = lab_trajectory(traj, std::max<std::size_t>(n, 2));
            const double window = cfg.window > 0.0 ? cfg.window : cfg.t_end / 6.0;
            ClassifyOptions opts;
            opts.eps_fp = cfg.eps_fp;
            opts.eps_rec = cfg.eps_rec;
            const TrajectoryClass cls = classify(points, window, opts);
            write_output(cfg, [&](std::ostream& os) {
                if (cfg.format == "csv") {
                    write_lab_trajectory_csv(os, points, cls, meta);
                } else {
                    write_lab_trajectory_json(os, points, cls, meta);
                }
            }, log);
            break;
        }
    }
}

} // namespace qsync
