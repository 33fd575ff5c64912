#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qsync/limit_cycle.hpp"

using namespace qsync;

namespace {
constexpr double pi = std::numbers::pi;

std::vector<LabSample> synthetic_circle(double omega, double t_end, std::size_t n,
                                        double phase = 0.0) {
    std::vector<LabSample> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t_end * static_cast<double>(i) / static_cast<double>(n - 1);
        pts[i].t = t;
        pts[i].lab = {std::cos(omega * t + phase), std::sin(omega * t + phase), 0.0, Frame::lab};
        pts[i].rotating = pts[i].lab;
    }
    return pts;
}

std::vector<LabSample> synthetic_spiral(double t_end, std::size_t n) {
    std::vector<LabSample> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t_end * static_cast<double>(i) / static_cast<double>(n - 1);
        const double r = std::exp(-t);
        pts[i].t = t;
        pts[i].lab = {r * std::cos(3.0 * t), r * std::sin(3.0 * t), -0.2, Frame::lab};
        pts[i].rotating = pts[i].lab;
    }
    return pts;
}

} // namespace

TEST_CASE("synthetic circle classifies as a limit cycle with the right period") {
    const double omega = 2.0;
    const auto pts = synthetic_circle(omega, 60.0, 4001);
    const TrajectoryClass cls = classify(pts, 10.0);
    CHECK(cls.verdict == Verdict::limit_cycle);
    REQUIRE(cls.period.has_value());
    CHECK(std::abs(*cls.period - 2.0 * pi / omega) / (2.0 * pi / omega) < 0.01);
}

TEST_CASE("synthetic inward spiral classifies as a fixed point") {
    const auto pts = synthetic_spiral(40.0, 3001);
    const TrajectoryClass cls = classify(pts, 6.0);
    CHECK(cls.verdict == Verdict::fixed_point);
    CHECK(cls.recurrence_distance < 1e-3);
}

TEST_CASE("classification is invariant under rigid z-rotation of the points") {
    const auto pts = synthetic_circle(1.5, 80.0, 4001);
    const TrajectoryClass a = classify(pts, 12.0);

    auto rotated = pts;
    const double c = std::cos(1.1), s = std::sin(1.1);
    for (auto& p : rotated) {
        const double x = p.lab.x * c - p.lab.y * s;
        const double y = p.lab.x * s + p.lab.y * c;
        p.lab.x = x;
        p.lab.y = y;
    }
    const TrajectoryClass b = classify(rotated, 12.0);
    CHECK(a.verdict == b.verdict);
    CHECK(*a.period == doctest::Approx(*b.period).epsilon(1e-12));
}

TEST_CASE("insufficient data is reported") {
    const auto pts = synthetic_circle(2.0, 10.0, 501);
    CHECK_THROWS_AS(classify(pts, 4.0), InsufficientData);  // 3*4 > 10/2
    const auto few = synthetic_circle(2.0, 10.0, 5);
    CHECK_THROWS_AS(classify(few, 1.0), InsufficientData);
}

TEST_CASE("noisy quasi-random walk stays undecided") {
    // deterministic pseudo-noise, no recurrence structure at eps_rec scale
    std::vector<LabSample> pts(3001);
    double x = 0.3, y = -0.1, z = 0.4;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double t = 60.0 * static_cast<double>(i) / 3000.0;
        x += 0.01 * std::sin(7919.0 * i);
        y += 0.01 * std::cos(4409.0 * i);
        z += 0.005 * std::sin(2801.0 * i + 1.0);
        pts[i].t = t;
        pts[i].lab = {x, y, z, Frame::lab};
    }
    const TrajectoryClass cls = classify(pts, 10.0);
    CHECK(cls.verdict == Verdict::undecided);
}

TEST_CASE("lab trajectory: omegaL = 0 leaves the rotating frame untouched") {
    SystemParams p = markov_preset();
    p.delta = p.omega0;  // omegaL = 0 -> lab frame equals the rotating frame
    p.omega0 += 1e-9;    // keep omega_laser validation satisfied
    EvolutionConfig cfg;
    cfg.t_end = 5.0;
    cfg.sample_times = EvolutionConfig::uniform_times(5.0, 201);
    const Trajectory traj = evolve(plus_state(), p, cfg);
    const auto pts = lab_trajectory(traj, 201);
    for (const auto& s : pts) {
        CHECK(std::abs(s.lab.x - s.rotating.x) < 1e-8);
        CHECK(std::abs(s.lab.y - s.rotating.y) < 1e-8);
        CHECK(s.lab.z == s.rotating.z);
    }
}

TEST_CASE("lab trajectory preserves the Bloch norm sample by sample") {
    const SystemParams p = markov_preset();
    EvolutionConfig cfg;
    cfg.t_end = 20.0;
    cfg.sample_times = EvolutionConfig::uniform_times(20.0, 2049);
    const Trajectory traj = evolve(plus_state(), p, cfg);
    const auto pts = lab_trajectory(traj, 2049);
    for (const auto& s : pts) {
        CHECK(std::abs(s.lab.norm() - s.rotating.norm()) < 1e-12);
    }
}

TEST_CASE("aliasing guard rejects coarse sampling") {
    const SystemParams p = markov_preset();  // omegaL = 4
    EvolutionConfig cfg;
    cfg.t_end = 20.0;
    cfg.sample_times = EvolutionConfig::uniform_times(20.0, 41);  // dt = 0.5, omegaL*dt = 2
    const Trajectory traj = evolve(plus_state(), p, cfg);
    CHECK_THROWS_AS(lab_trajectory(traj, 41), AliasingError);
}

TEST_CASE("closed-system Rabi flopping against the analytic solution") {
    // gamma = 0, Delta = 0, epsilon = 1, initial |1>: mz(t) = cos(t),
    // my(t) = -sin(t), mx = 0 in the rotating frame.
    SystemParams p;
    p.delta = 0.0;
    p.epsilon = 1.0;
    p.gamma = 0.0;
    EvolutionConfig cfg;
    cfg.t_end = 25.0;
    cfg.sample_times = EvolutionConfig::uniform_times(25.0, 2001);
    const QubitState up = state_from_bloch(0.0, 0.0, 1.0);
    const Trajectory traj = evolve(up, p, cfg);
    const auto pts = lab_trajectory(traj, 2001);

    double min_z = 1.0, max_z = -1.0;
    const double omega_l = p.omega_laser();
    for (const auto& s : pts) {
        CHECK(std::abs(s.rotating.z - std::cos(s.t)) < 1e-7);
        CHECK(std::abs(s.rotating.y + std::sin(s.t)) < 1e-7);
        CHECK(std::abs(s.rotating.x) < 1e-7);
        // lab components follow the closed form rotated at omegaL
        const double mx = std::sin(omega_l * s.t) * std::sin(s.t);
        const double my = -std::cos(omega_l * s.t) * std::sin(s.t);
        CHECK(std::abs(s.lab.x - mx) < 1e-7);
        CHECK(std::abs(s.lab.y - my) < 1e-7);
        min_z = std::min(min_z, s.lab.z);
        max_z = std::max(max_z, s.lab.z);
    }
    // full Rabi flopping reaches both poles
    CHECK(min_z < -0.999);
    CHECK(max_z > 0.999);
}

TEST_CASE("verdict stable under tolerance halving on a real trajectory") {
    const SystemParams p = markov_preset();
    EvolutionConfig cfg;
    cfg.t_end = 120.0;
    cfg.sample_times = EvolutionConfig::uniform_times(120.0, 6001);

    EvolutionConfig tighter = cfg;
    tighter.rel_tol /= 2.0;
    tighter.abs_tol /= 2.0;

    const auto a = lab_trajectory(evolve(plus_state(), p, cfg), 6001);
    const auto b = lab_trajectory(evolve(plus_state(), p, tighter), 6001);
    const TrajectoryClass ca = classify(a, 15.0);
    const TrajectoryClass cb = classify(b, 15.0);
    CHECK(ca.verdict == cb.verdict);
    if (ca.period && cb.period) {
        CHECK(std::abs(*ca.period - *cb.period) / *ca.period < 0.02);
    }
}
