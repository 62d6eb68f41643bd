#pragma once

#include "episis/errors.hpp"

namespace episis {

/// Rates of the Markovian SIS process. τ = β/δ is the only dimensionless
/// parameter; δ defaults to 1 so that τ == β.
struct EpidemicParams {
    double beta = 0.0;  ///< infection rate per S-I link
    double delta = 1.0; ///< curing rate per infected node

    double tau() const noexcept { return beta / delta; }

    static EpidemicParams from_tau(double tau, double delta = 1.0) { return {tau * delta, delta}; }

    void validate() const
    {
        if (!(beta >= 0.0))
            throw InvalidArgument("infection rate beta must be >= 0");
        if (!(delta > 0.0))
            throw InvalidArgument("curing rate delta must be > 0");
    }

    friend bool operator==(const EpidemicParams&, const EpidemicParams&) = default;
};

/// Options shared by the fixed-step RK4 solvers.
struct Rk4Options {
    double step = 0.01;
    /// Shrink `step` to 2.5 / (Gershgorin bound on the spectral radius of the
    /// linearization) so RK4 stays inside its real-axis stability interval.
    bool limit_to_stability = true;
};

} // namespace episis
