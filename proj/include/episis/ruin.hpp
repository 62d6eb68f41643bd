#pragma once

#include <cstddef>

#include "episis/errors.hpp"

namespace episis {

/// Normalized effective infection rate x = τ·λ1 (x = 1 at the NIMFA threshold).
class NormalizedRate {
public:
    explicit NormalizedRate(double x) : x_(x)
    {
        if (!(x > 0.0))
            throw InvalidArgument("normalized rate x must be positive");
    }

    static NormalizedRate from(double tau, double lambda1) { return NormalizedRate(tau * lambda1); }

    double value() const noexcept { return x_; }

private:
    double x_;
};

/// Probability that the chain on K_N started with n infected hits 0 before N:
/// μ_n = p_{N−n−1}(τ) / p_{N−1}(τ), with p_m(z) = Σ_{j=0}^{m} j!·z^j.
/// Evaluated in the log domain; safe for N up to 10^4 and beyond.
double gamblers_ruin(std::size_t n_nodes, double tau, std::size_t n);

/// log μ_n; −inf for n = N. Keeps full relative accuracy where μ_n itself
/// underflows a double.
double log_gamblers_ruin(std::size_t n_nodes, double tau, std::size_t n);

/// Large-τ form 1 / [((N−1)τ)^n · Π_{k=1}^{n−1} (1 − k/(N−1))], requires
/// τ > 1/(N−1) and n < N.
double ruin_asymptotic(std::size_t n_nodes, double tau, std::size_t n);

/// min(1, x^−n); below threshold the process dies out with probability → 1.
double dieout_approx(NormalizedRate x, std::size_t n);

/// f(t) = 1 − x^−n + x^−n·e^(−λ1 t). Requires x >= 1.
double survival_function(NormalizedRate x, std::size_t n, double lambda1, double t);

} // namespace episis
