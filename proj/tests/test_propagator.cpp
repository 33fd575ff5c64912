#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qsync/propagator.hpp"

using namespace qsync;

namespace {

SystemParams gammaless(double delta, double epsilon) {
    SystemParams p;
    p.delta = delta;
    p.epsilon = epsilon;
    p.gamma = 0.0;
    return p;
}

} // namespace

TEST_CASE("evolution config validation") {
    EvolutionConfig cfg;
    cfg.t_end = 10.0;
    cfg.sample_times = {0.0, 5.0, 10.0};
    CHECK_NOTHROW(cfg.validate());

    cfg.sample_times = {5.0, 5.0};
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg.sample_times = {5.0, 11.0};
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg.sample_times = {};
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg.sample_times = {5.0};
    cfg.rel_tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("default max step follows the fastest frequency") {
    const SystemParams p = markov_preset();  // omegaL = 4, lambda = 5
    const DressedFrame f = build_dressed_frame(p);
    EvolutionConfig cfg;
    cfg.t_end = 500.0;
    cfg.sample_times = {500.0};
    const double expected = 0.01 / (p.omega_laser() + f.rabi);  // fastest of the three scales
    CHECK(cfg.resolved_max_step(p, f) == doctest::Approx(expected).epsilon(1e-12));

    cfg.t_end = 0.05;  // now the t_end/100 cap wins
    CHECK(cfg.resolved_max_step(p, f) == doctest::Approx(0.0005).epsilon(1e-12));

    cfg.max_step = 1e-3;  // explicit value bypasses the default
    CHECK(cfg.resolved_max_step(p, f) == 1e-3);
}

TEST_CASE("master_rhs without memory coefficients is pure precession") {
    const SystemParams p = markov_preset();
    const DressedFrame f = build_dressed_frame(p);
    oracle::Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        QubitState s{rng.density_matrix(), Frame::dressed, 0.0};
        const Matrix2c d = master_rhs(s, MemoryCoefficients{}, f);
        CHECK(std::abs(d(0, 0)) < 1e-16);
        CHECK(std::abs(d(1, 1)) < 1e-16);
        CHECK(std::abs(d(0, 1)) == doctest::Approx(f.rabi * std::abs(s.rho(0, 1))).epsilon(1e-13));
    }
}

TEST_CASE("master_rhs requires the dressed frame") {
    const SystemParams p = markov_preset();
    const DressedFrame f = build_dressed_frame(p);
    CHECK_THROWS_AS(master_rhs(plus_state(Frame::bare_rotating), MemoryCoefficients{}, f),
                    FrameMismatch);
}

TEST_CASE("master_rhs matches the literal Pauli-product oracle") {
    oracle::Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        SystemParams p;
        p.delta = rng.uniform(-2, 2);
        p.epsilon = rng.uniform(0.01, 2);
        p.omega0 = 8.0;
        const DressedFrame f = build_dressed_frame(p);
        QubitState s{rng.hermitian_trace_one(), Frame::dressed, 0.0};
        MemoryCoefficients m;
        m.gamma1 = rng.complex_in_disc(1.0);
        m.gamma2 = rng.complex_in_disc(1.0);
        m.gamma3 = rng.complex_in_disc(1.0);

        const Matrix2c mine = master_rhs(s, m, f);
        const Matrix2c ref = oracle::master_rhs_products(s.rho, m.gamma1, m.gamma2, m.gamma3, f);
        CHECK((mine - ref).cwiseAbs().maxCoeff() < 1e-13);
        CHECK(std::abs(mine.trace()) < 1e-13);
    }
}

TEST_CASE("master_rhs is linear in rho") {
    const SystemParams p = markov_preset();
    const DressedFrame f = build_dressed_frame(p);
    oracle::Rng rng(5);
    MemoryCoefficients m;
    m.gamma1 = {0.3, -0.1};
    m.gamma2 = {-0.2, 0.25};
    m.gamma3 = {0.5, 0.4};
    for (int i = 0; i < 25; ++i) {
        const Matrix2c r1 = rng.hermitian_trace_one();
        const Matrix2c r2 = rng.hermitian_trace_one();
        const double a = rng.uniform(-1.0, 2.0);
        const double b = 1.0 - a;
        QubitState s1{r1, Frame::dressed, 0.0}, s2{r2, Frame::dressed, 0.0};
        QubitState sc{a * r1 + b * r2, Frame::dressed, 0.0};
        const Matrix2c lhs = master_rhs(sc, m, f);
        const Matrix2c rhs = a * master_rhs(s1, m, f) + b * master_rhs(s2, m, f);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("closed system: |+> at resonance is stationary in coherence magnitude") {
    // gamma = 0: |+> is the dressed excited state at Delta=0, so rho is
    // stationary there and |rho10| in the bare frame stays exactly 1/2.
    const SystemParams p = gammaless(0.0, 1.0);
    EvolutionConfig cfg;
    cfg.t_end = 50.0;
    cfg.sample_times = EvolutionConfig::uniform_times(50.0, 101);
    const Trajectory traj = evolve(plus_state(), p, cfg);
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const QubitState bare = traj.state_at(i, Frame::bare_rotating);
        CHECK(std::abs(std::abs(bare.rho(0, 1)) - 0.5) < 1e-9);
    }
}

TEST_CASE("closed system: dressed populations conserved to 1e-10") {
    const SystemParams p = gammaless(1.0, 1.0);
    EvolutionConfig cfg;
    cfg.t_end = 100.0;
    cfg.sample_times = EvolutionConfig::uniform_times(100.0, 51);
    const Trajectory traj = evolve(plus_state(), p, cfg);
    const double p0 = traj.samples.front().rho_dressed(0, 0).real();
    for (const auto& s : traj.samples) {
        CHECK(std::abs(s.rho_dressed(0, 0).real() - p0) < 1e-10);
        // coherence magnitude conserved as well under pure precession
        CHECK(std::abs(std::abs(s.rho_dressed(0, 1)) -
                       std::abs(traj.samples.front().rho_dressed(0, 1))) < 1e-10);
    }
}

TEST_CASE("markov preset: conservation laws along the full evolution") {
    const SystemParams p = markov_preset();
    EvolutionConfig cfg;
    cfg.t_end = 100.0;
    cfg.sample_times = EvolutionConfig::uniform_times(100.0, 201);
    const Trajectory traj = evolve(plus_state(), p, cfg);

    CHECK(traj.samples.size() == 201);
    for (const auto& s : traj.samples) {
        QubitState q{s.rho_dressed, Frame::dressed, s.t};
        CHECK(q.trace_error() < 1e-9);
        CHECK(q.hermiticity_error() < 1e-12);
        CHECK(s.min_eigenvalue > -1e-6);
    }
    CHECK(traj.samples.front().memory.gamma1 == Complex(0.0, 0.0));
    // memory coefficients must have moved away from zero
    CHECK(std::abs(traj.samples.back().memory.gamma1) > 0.1);
}

TEST_CASE("sample times are honored exactly, including t = 0 and t_end") {
    const SystemParams p = nonmarkov_preset();
    EvolutionConfig cfg;
    cfg.t_end = 7.0;
    cfg.sample_times = {0.0, 1.2345, 3.0, 7.0};
    const Trajectory traj = evolve(plus_state(), p, cfg);
    REQUIRE(traj.samples.size() == 4);
    CHECK(traj.samples[0].t == 0.0);
    CHECK(traj.samples[1].t == 1.2345);
    CHECK(traj.samples[3].t == 7.0);
}

TEST_CASE("initial state may be given directly in the dressed frame") {
    const SystemParams p = markov_preset();
    EvolutionConfig cfg;
    cfg.t_end = 5.0;
    cfg.sample_times = {5.0};
    const DressedFrame f = build_dressed_frame(p);
    const QubitState dressed = rotate_to_dressed(plus_state(), f);
    const Trajectory a = evolve(plus_state(), p, cfg);
    const Trajectory b = evolve(dressed, p, cfg);
    CHECK((a.samples[0].rho_dressed - b.samples[0].rho_dressed).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("tolerance tightening: deviation small and monotone within factor 2") {
    const SystemParams p = markov_preset();
    EvolutionConfig cfg;
    cfg.t_end = 50.0;
    cfg.sample_times = EvolutionConfig::uniform_times(50.0, 26);

    const ConvergenceReport r1 = convergence_deviation(plus_state(), p, cfg);
    CHECK(r1.max_rho_deviation < 1e-6);

    EvolutionConfig tighter = cfg;
    tighter.rel_tol = cfg.rel_tol / 10.0;
    tighter.abs_tol = cfg.abs_tol / 10.0;
    const ConvergenceReport r2 = convergence_deviation(plus_state(), p, tighter);
    CHECK(r2.max_rho_deviation <= std::max(2.0 * r1.max_rho_deviation, 1e-12));
}

TEST_CASE("markov preset: coherence oscillates early, saturates late") {
    const SystemParams p = markov_preset();
    EvolutionConfig cfg;
    cfg.t_end = 500.0;
    cfg.sample_times = EvolutionConfig::uniform_times(500.0, 501);
    const Trajectory traj = evolve(plus_state(), p, cfg);

    double early_min = 1.0, early_max = 0.0;
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const double a = std::abs(traj.state_at(i, Frame::bare_rotating).rho(0, 1));
        if (traj.samples[i].t <= 20.0) {
            early_min = std::min(early_min, a);
            early_max = std::max(early_max, a);
        }
    }
    const double a450 = std::abs(traj.state_at(450, Frame::bare_rotating).rho(0, 1));
    const double a500 = std::abs(traj.state_at(500, Frame::bare_rotating).rho(0, 1));
    CHECK(early_max - early_min > 0.05);       // transient oscillation
    CHECK(std::abs(a500 - a450) < 1e-3);       // saturated tail
    CHECK(a500 > 0.0);
    CHECK(a500 < 0.5);
}

TEST_CASE("strong coupling trips the positivity warning without clamping") {
    // The time-local second-order equation is not completely positive; at
    // gamma = 10, lambda = 1 the state leaves the Bloch ball measurably.
    SystemParams p = markov_preset();
    p.gamma = 10.0;
    p.lambda = 1.0;
    EvolutionConfig cfg;
    cfg.t_end = 20.0;
    cfg.sample_times = EvolutionConfig::uniform_times(20.0, 401);
    const Trajectory traj = evolve(plus_state(), p, cfg);
    CHECK(traj.diagnostics.positivity_warning);
    CHECK(traj.diagnostics.min_eigenvalue < -1e-6);
    // the violation is reported, never repaired
    double sampled_min = 1.0;
    for (const auto& s : traj.samples) {
        sampled_min = std::min(sampled_min, s.min_eigenvalue);
        QubitState q{s.rho_dressed, Frame::dressed, s.t};
        CHECK(q.trace_error() < 1e-9);
        CHECK(q.hermiticity_error() < 1e-12);
    }
    CHECK(sampled_min == traj.diagnostics.min_eigenvalue);
}

TEST_CASE("unreachable tolerances raise ToleranceFailure") {
    const SystemParams p = markov_preset();
    EvolutionConfig cfg;
    cfg.t_end = 10.0;
    cfg.sample_times = {10.0};
    cfg.rel_tol = 1e-300;
    cfg.abs_tol = 1e-300;
    CHECK_THROWS_AS(evolve(plus_state(), p, cfg), ToleranceFailure);
}

TEST_CASE("invalid initial state is rejected") {
    const SystemParams p = markov_preset();
    EvolutionConfig cfg;
    cfg.t_end = 1.0;
    cfg.sample_times = {1.0};
    QubitState bad = plus_state();
    bad.rho(0, 0) = 0.7;
    CHECK_THROWS_AS(evolve(bad, p, cfg), ValidationError);
}
