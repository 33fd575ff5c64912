// qsync_cli.cpp — command-line front end.
//
// Exit codes: 0 success, 2 configuration error, 3 integration/analysis
// failure, 4 I/O error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qsync/config.hpp"
#include "qsync/errors.hpp"
#include "qsync/version.hpp"

namespace {

struct FlagCapture {
    qsync::KeyValueList overrides;
    std::string config_path;

    // Registers a flag that, when given, lands in the override list.
    void add(CLI::App* app, const std::string& flag, const std::string& key,
             const std::string& help) {
        app->add_option_function<std::string>(
               flag, [this, key](const std::string& v) { overrides.emplace_back(key, v); }, help);
    }
};

int dispatch(const std::string& command, FlagCapture& flags) {
    std::string file_text;
    if (!flags.config_path.empty()) {
        std::ifstream in(flags.config_path);
        if (!in) {
            std::cerr << "error: cannot read config file '" << flags.config_path << "'\n";
            return 4;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        file_text = ss.str();
    }

    qsync::KeyValueList overrides;
    overrides.emplace_back("command", command);
    overrides.insert(overrides.end(), flags.overrides.begin(), flags.overrides.end());

    try {
        const qsync::RunConfig cfg = qsync::parse_config(file_text, overrides);
        qsync::run(cfg, std::cout);
        return 0;
    } catch (const qsync::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const qsync::ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const qsync::DegenerateFrame& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const qsync::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const qsync::Error& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return 3;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qsync — driven-qubit synchronization simulator"};
    app.set_version_flag("--version", qsync::version_string());
    app.require_subcommand(1);

    FlagCapture flags;

    auto add_common = [&flags](CLI::App* sub) {
        sub->add_option("--config", flags.config_path, "key = value config file");
        flags.add(sub, "--preset", "preset", "parameter preset: markov or nonmarkov");
        flags.add(sub, "--delta", "delta", "detuning in units of gamma0");
        flags.add(sub, "--epsilon", "epsilon", "drive strength");
        flags.add(sub, "--gamma", "gamma", "system-bath coupling");
        flags.add(sub, "--lambda", "lambda", "Ohmic cutoff");
        flags.add(sub, "--omega0", "omega0", "bare qubit frequency");
        flags.add(sub, "--t-end", "t_end", "integration horizon in 1/gamma0");
        flags.add(sub, "--rel-tol", "rel_tol", "relative tolerance");
        flags.add(sub, "--abs-tol", "abs_tol", "absolute tolerance");
        flags.add(sub, "--max-step", "max_step", "step-size cap (0 = automatic)");
        flags.add(sub, "--samples", "samples", "number of output samples");
        flags.add(sub, "--initial-bloch", "initial_bloch", "initial Bloch vector mx;my;mz");
        flags.add(sub, "--initial-frame", "initial_frame", "frame of the initial state");
        flags.add(sub, "--observable-frame", "observable_frame",
                  "frame observables are evaluated in (bare or dressed)");
        flags.add(sub, "--out", "out", "output path ('-' = stdout)");
        flags.add(sub, "--format", "format", "csv or json");
    };

    CLI::App* evolve = app.add_subcommand("evolve", "integrate the master equation");
    add_common(evolve);

    CLI::App* qfunc = app.add_subcommand("qfunc", "Husimi Q-function grid at a fixed time");
    add_common(qfunc);
    flags.add(qfunc, "--time", "time", "evaluation time");
    flags.add(qfunc, "--ntheta", "ntheta", "polar grid points");
    flags.add(qfunc, "--nphi", "nphi", "azimuthal grid points");

    CLI::App* sweep = app.add_subcommand("sweep", "S_m map over a parameter grid");
    add_common(sweep);
    flags.add(sweep, "--grid", "grid", "axes as name:min:max:n,name:min:max:n");
    flags.add(sweep, "--t-eval", "t_eval", "evaluation time");
    flags.add(sweep, "--threshold", "threshold", "tongue mask threshold");
    flags.add(sweep, "--threads", "threads", "worker threads (0 = hardware)");

    CLI::App* trajectory = app.add_subcommand("trajectory", "lab-frame Bloch trajectory + classification");
    add_common(trajectory);
    flags.add(trajectory, "--n-samples", "n_samples", "trajectory points exported");
    flags.add(trajectory, "--window", "window", "classification window (0 = span/6)");
    flags.add(trajectory, "--eps-fp", "eps_fp", "fixed-point diameter");
    flags.add(trajectory, "--eps-rec", "eps_rec", "recurrence distance");

    CLI11_PARSE(app, argc, argv);

    for (CLI::App* sub : {evolve, qfunc, sweep, trajectory}) {
        if (sub->parsed()) {
            return dispatch(sub->get_name(), flags);
        }
    }
    return 2;
}
