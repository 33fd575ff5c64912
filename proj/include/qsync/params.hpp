// params.hpp — physical parameters of the driven qubit and its Ohmic bath
//
// All frequencies and rates are dimensionless in units of the reference
// rate gamma0; time is measured in units of 1/gamma0.

#pragma once

#include <string>

#include "qsync/errors.hpp"

namespace qsync {

enum class Regime { markov, non_markov };

struct SystemParams {
    double delta = 1.0;    // detuning Delta = omega0 - omegaL
    double epsilon = 1.0;  // laser drive strength, >= 0
    double omega0 = 5.0;   // bare qubit transition frequency, > 0
    double gamma = 0.1;    // system-bath coupling, >= 0
    double lambda = 5.0;   // Ohmic cutoff frequency, > 0

    // Laser frequency is derived, never stored.
    double omega_laser() const { return omega0 - delta; }

    // Short bath memory (lambda > 2 gamma) gives Markovian dynamics.
    Regime regime() const {
        return lambda > 2.0 * gamma ? Regime::markov : Regime::non_markov;
    }

    // Throws ValidationError naming the violated invariant.
    void validate() const;
};

const char* regime_name(Regime r);

// Parameter sets used throughout: both share gamma = 0.1, epsilon = 1,
// delta = 1 and differ only in the bath cutoff.
SystemParams markov_preset();     // lambda = 5
SystemParams nonmarkov_preset();  // lambda = 0.01

} // namespace qsync
