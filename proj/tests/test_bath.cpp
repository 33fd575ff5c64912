#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qsync/bath.hpp"
#include "qsync/propagator.hpp"

using namespace qsync;
namespace {
constexpr double pi = std::numbers::pi;
} // namespace

TEST_CASE("Ohmic spectral density") {
    SystemParams p = markov_preset();  // gamma = 0.1, lambda = 5
    CHECK(spectral_density(0.0, p) == 0.0);
    CHECK(spectral_density(5.0, p) == doctest::Approx(0.18393972058572117).epsilon(1e-15));
    CHECK_THROWS_AS(spectral_density(-1e-9, p), DomainError);

    // maximum sits at omega = lambda with value gamma*lambda/e
    const double peak = spectral_density(p.lambda, p);
    CHECK(peak == doctest::Approx(p.gamma * p.lambda / std::exp(1.0)).epsilon(1e-14));
    for (double w : {0.1, 1.0, 3.0, 4.9, 5.1, 8.0, 20.0}) {
        CHECK(spectral_density(w, p) <= peak + 1e-15);
    }
}

TEST_CASE("closed-form correlation function") {
    SystemParams p = markov_preset();
    const Complex c0 = correlation(0.0, p);
    CHECK(c0.real() == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(c0.imag() == 0.0);

    // hand-evaluated 2.5/(1+5i)^2 = (-60 - 25i)/676
    const Complex c1 = correlation(1.0, p);
    CHECK(c1.real() == doctest::Approx(-0.088757396449704142).epsilon(1e-14));
    CHECK(c1.imag() == doctest::Approx(-0.036982248520710059).epsilon(1e-14));

    // modulus envelope gamma lambda^2 / (1 + lambda^2 s^2), decaying to zero
    double prev = std::abs(correlation(0.0, p));
    for (double s : {0.5, 1.0, 2.0, 5.0, 20.0, 100.0}) {
        const double env = p.gamma * p.lambda * p.lambda / (1.0 + p.lambda * p.lambda * s * s);
        CHECK(std::abs(correlation(s, p)) == doctest::Approx(env).epsilon(1e-12));
        CHECK(std::abs(correlation(s, p)) < prev);
        prev = std::abs(correlation(s, p));
    }
}

TEST_CASE("closed form agrees with the quadrature oracle on both presets") {
    for (const SystemParams& p : {markov_preset(), nonmarkov_preset()}) {
        for (double s : {0.1, 1.0, 10.0}) {
            const Complex closed = correlation(s, p);
            const Complex quad = oracle::correlation_quadrature(s, p, 1e-13);
            CHECK(std::abs(closed - quad) / std::abs(closed) < 1e-8);
        }
    }
}

TEST_CASE("memory derivative at t = 0 equals C(0) for every channel") {
    for (const SystemParams& p : {markov_preset(), nonmarkov_preset()}) {
        const DressedFrame f = build_dressed_frame(p);
        const auto d = memory_rhs(0.0, p, f);
        const double expected = p.gamma * p.lambda * p.lambda;
        for (const Complex& g : d) {
            CHECK(g.real() == doctest::Approx(expected).epsilon(1e-15));
            CHECK(g.imag() == 0.0);
        }
    }
}

TEST_CASE("for epsilon = 0 the sideband channels are frequency-shifted copies") {
    SystemParams p = markov_preset();
    p.epsilon = 0.0;
    p.delta = 0.7;
    const DressedFrame f = build_dressed_frame(p);

    SystemParams down = p;  // omega_laser shifted by -delta_rabi
    down.omega0 -= f.rabi;
    SystemParams up = p;
    up.omega0 += f.rabi;
    const DressedFrame fd = build_dressed_frame(down);
    const DressedFrame fu = build_dressed_frame(up);

    for (double t : {0.0, 0.3, 1.7, 12.0}) {
        const auto base = memory_rhs(t, p, f);
        CHECK(std::abs(base[1] - memory_rhs(t, down, fd)[0]) < 1e-12);
        CHECK(std::abs(base[2] - memory_rhs(t, up, fu)[0]) < 1e-12);
    }
}

TEST_CASE("ODE reduction matches the literal double integral") {
    // Gamma_1(2) for gamma=0.1, lambda=5, omegaL=4: integrate the reduced
    // 1D form and the nested 2D oracle independently.
    SystemParams p = markov_preset();  // delta=1 -> omegaL = 4
    const DressedFrame f = build_dressed_frame(p);

    const Complex reduced = oracle::gamma_single_quadrature(1, 2.0, p, f);
    const Complex nested = oracle::gamma_double_quadrature(1, 2.0, p, f);
    CHECK(std::abs(reduced - nested) < 1e-6);

    // same reduction for the sideband channels
    for (int k : {2, 3}) {
        const Complex r = oracle::gamma_single_quadrature(k, 2.0, p, f);
        const Complex n = oracle::gamma_double_quadrature(k, 2.0, p, f);
        CHECK(std::abs(r - n) < 1e-6);
    }
}

TEST_CASE("co-integrated Gamma matches the nested double-integral oracle") {
    SystemParams p = markov_preset();
    const DressedFrame f = build_dressed_frame(p);

    EvolutionConfig cfg;
    cfg.t_end = 2.0;
    cfg.sample_times = {2.0};
    const Trajectory traj = evolve(plus_state(), p, cfg);
    const MemoryCoefficients m = traj.samples[0].memory;

    CHECK(std::abs(m.gamma1 - oracle::gamma_double_quadrature(1, 2.0, p, f)) < 1e-6);
    CHECK(std::abs(m.gamma2 - oracle::gamma_double_quadrature(2, 2.0, p, f)) < 1e-6);
    CHECK(std::abs(m.gamma3 - oracle::gamma_double_quadrature(3, 2.0, p, f)) < 1e-6);
}

TEST_CASE("long-time limit: Re Gamma_1 approaches pi J(omegaL)") {
    SystemParams p = markov_preset();  // omegaL = 4, lambda = 5
    const DressedFrame f = build_dressed_frame(p);
    const Complex g1 = oracle::gamma_single_quadrature(1, 200.0, p, f, 1e-10);
    const double limit = pi * spectral_density(p.omega_laser(), p);
    CHECK(std::abs(g1.real() - limit) / limit < 0.01);
}
