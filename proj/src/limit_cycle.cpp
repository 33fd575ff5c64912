#include "qsync/limit_cycle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qsync {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::fixed_point: return "fixed_point";
        case Verdict::limit_cycle: return "limit_cycle";
        case Verdict::undecided: return "undecided";
    }
    return "unknown";
}

std::vector<LabSample> lab_trajectory(const Trajectory& traj, std::size_t n_samples) {
    if (traj.samples.empty()) {
        throw ValidationError("lab_trajectory: empty trajectory");
    }
    if (n_samples < 2) {
        throw ValidationError("lab_trajectory: n_samples >= 2 required");
    }
    if (n_samples > traj.samples.size()) {
        throw ValidationError("lab_trajectory: trajectory holds fewer samples than requested");
    }
    const double omega_l = traj.params.omega_laser();
    const std::size_t stride_base = traj.samples.size() - 1;

    std::vector<LabSample> out;
    out.reserve(n_samples);
    double prev_t = 0.0;
    for (std::size_t k = 0; k < n_samples; ++k) {
        const std::size_t idx =
            (k * stride_base + (n_samples - 1) / 2) / (n_samples - 1);
        const QubitState bare = traj.state_at(idx, Frame::bare_rotating);
        LabSample s;
        s.t = bare.time;
        s.rotating = bloch_rotating(bare);
        s.lab = bloch_lab(s.rotating, s.t, omega_l);
        if (k > 0) {
            const double dt = s.t - prev_t;
            if (omega_l * dt > std::numbers::pi / 8.0 * (1.0 + 1e-9)) {
                throw AliasingError("lab_trajectory: omegaL*dt exceeds pi/8, sampling too coarse");
            }
        }
        prev_t = s.t;
        out.push_back(s);
    }
    return out;
}

namespace {

double dist(const BlochVector& a, const BlochVector& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// Distance from p to the segment (a, b) and the affine parameter s in [0, 1]
// of the closest point; works on the polyline so that the recurrence test
// is not floored by the sample spacing.
double segment_dist(const BlochVector& p, const BlochVector& a, const BlochVector& b, double& s) {
    const double ux = b.x - a.x, uy = b.y - a.y, uz = b.z - a.z;
    const double wx = p.x - a.x, wy = p.y - a.y, wz = p.z - a.z;
    const double uu = ux * ux + uy * uy + uz * uz;
    s = uu > 0.0 ? std::clamp((wx * ux + wy * uy + wz * uz) / uu, 0.0, 1.0) : 0.0;
    const double dx = wx - s * ux;
    const double dy = wy - s * uy;
    const double dz = wz - s * uz;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

} // namespace

TrajectoryClass classify(const std::vector<LabSample>& points, double window,
                         const ClassifyOptions& options) {
    if (points.size() < 8) {
        throw InsufficientData("classify: need at least 8 trajectory points");
    }
    if (!(window > 0.0)) {
        throw InsufficientData("classify: window must be positive");
    }
    const double t0 = points.front().t;
    const double t1 = points.back().t;
    const double span = t1 - t0;
    const double cut = options.transient_cut >= 0.0 ? options.transient_cut : 0.5 * span;
    const double post_start = t0 + cut;
    if (t1 - post_start < 3.0 * window * (1.0 - 1e-12)) {
        throw InsufficientData("classify: post-transient span shorter than 3 windows");
    }

    TrajectoryClass result;
    result.transient_cut = cut;

    // Index ranges of the post-transient region and the final window.
    auto by_time = [](const LabSample& s, double t) { return s.t < t; };
    const std::size_t post_begin = static_cast<std::size_t>(
        std::lower_bound(points.begin(), points.end(), post_start, by_time) - points.begin());
    const std::size_t final_begin = static_cast<std::size_t>(
        std::lower_bound(points.begin(), points.end(), t1 - window, by_time) - points.begin());
    if (final_begin <= post_begin || points.size() - final_begin < 4) {
        throw InsufficientData("classify: final window contains too few points");
    }

    // Fixed point: the final window collapses to a ball of diameter eps_fp.
    const std::size_t pair_stride = std::max<std::size_t>(1, (points.size() - final_begin) / 2048);
    double diameter = 0.0;
    for (std::size_t a = final_begin; a < points.size(); a += pair_stride) {
        for (std::size_t b = a + pair_stride; b < points.size(); b += pair_stride) {
            diameter = std::max(diameter, dist(points[a].lab, points[b].lab));
        }
    }
    if (diameter < options.eps_fp) {
        result.verdict = Verdict::fixed_point;
        result.recurrence_distance = diameter;
        return result;
    }

    // Recurrence: walk backwards along the polyline from each final-window
    // point, first leaving its eps-ball, then looking for the first return
    // below eps_rec. Segment distances avoid the sample-spacing floor.
    const double eps_escape = 2.0 * options.eps_rec;
    std::vector<double> lags;
    double worst_return = 0.0;
    bool all_recur = true;

    // Cap the number of reference points to keep the scan cheap.
    const std::size_t n_final = points.size() - final_begin;
    const std::size_t stride = std::max<std::size_t>(1, n_final / 200);

    for (std::size_t a = final_begin; a < points.size() && all_recur; a += stride) {
        const BlochVector& ref = points[a].lab;
        bool escaped = false;
        bool found = false;
        for (std::size_t b = a; b-- > post_begin;) {
            double s = 0.0;
            const double d = segment_dist(ref, points[b].lab, points[b + 1].lab, s);
            if (!escaped) {
                escaped = d > eps_escape;
                continue;
            }
            if (d < options.eps_rec) {
                // Refine to the local minimum of the distance along the curve.
                std::size_t best = b;
                double best_d = d;
                double best_s = s;
                while (best > post_begin) {
                    double sn = 0.0;
                    const double dn = segment_dist(ref, points[best - 1].lab, points[best].lab, sn);
                    if (dn >= best_d) break;
                    best_d = dn;
                    best_s = sn;
                    --best;
                }
                const double t_close = points[best].t +
                                       best_s * (points[best + 1].t - points[best].t);
                lags.push_back(points[a].t - t_close);
                worst_return = std::max(worst_return, best_d);
                found = true;
                break;
            }
        }
        if (!found) {
            all_recur = false;
        }
    }

    if (all_recur && !lags.empty()) {
        std::vector<double> sorted = lags;
        std::sort(sorted.begin(), sorted.end());
        const double median = sorted[sorted.size() / 2];
        const double spread = (sorted.back() - sorted.front()) / median;
        if (median > 0.0 && spread < 0.10) {
            result.verdict = Verdict::limit_cycle;
            result.period = median;
            result.recurrence_distance = worst_return;
            return result;
        }
    }

    result.verdict = Verdict::undecided;
    result.recurrence_distance = diameter;
    return result;
}

} // namespace qsync
