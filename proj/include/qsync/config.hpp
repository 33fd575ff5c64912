// config.hpp — run configuration: flat key = value text, presets, flag
// overrides, and the command dispatcher used by the CLI.

#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qsync/dressed.hpp"
#include "qsync/params.hpp"
#include "qsync/propagator.hpp"

namespace qsync {

enum class Command { evolve, qfunc, sweep, trajectory };

const char* command_name(Command c);

using KeyValue = std::pair<std::string, std::string>;
using KeyValueList = std::vector<KeyValue>;

struct RunConfig {
    Command command = Command::evolve;
    std::string preset;  // empty, "markov" or "nonmarkov"
    SystemParams params;

    // evolution
    double t_end = 500.0;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double max_step = 0.0;  // 0 = automatic
    std::size_t samples = 1001;

    // initial state
    double initial_bloch[3] = {1.0, 0.0, 0.0};  // |+> by default
    Frame initial_frame = Frame::bare_rotating;

    // observables
    Frame observable_frame = Frame::bare_rotating;

    // qfunc
    double qfunc_time = 0.0;
    std::size_t n_theta = 181;
    std::size_t n_phi = 360;

    // sweep: axis spec strings like "delta:-2:2:81"
    std::string grid = "delta:-2:2:81,epsilon:0.1:2:81";
    double t_eval = 500.0;
    double threshold = 0.05;
    unsigned threads = 0;

    // trajectory
    std::size_t n_samples = 4096;
    double window = 0.0;  // 0 = span/6
    double eps_fp = 1e-3;
    double eps_rec = 1e-2;

    // output
    std::string out = "-";  // "-" = stdout
    std::string format = "csv";

    EvolutionConfig evolution_config() const;
    QubitState initial_state() const;

    void validate() const;  // throws ValidationError

    // Flat key = value form; parse_config(serialize(cfg)) reproduces cfg.
    std::string serialize() const;
    // Ordered metadata written into every output file.
    KeyValueList metadata() const;
};

// Parses line-oriented `key = value` text ('#' starts a comment, blank
// lines ignored, unknown keys are errors) and applies flag overrides on
// top. A preset key (flag wins over file) expands first, then file keys
// in order, then overrides in order.
RunConfig parse_config(const std::string& file_text, const KeyValueList& overrides = {});

// Executes the configured command and writes its output file.
// Throws; the CLI maps exception classes to exit codes.
void run(const RunConfig& config, std::ostream& log);

} // namespace qsync
