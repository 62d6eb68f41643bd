#include "episis/ruin.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace episis {

namespace {

void check_ruin_args(std::size_t n_nodes, double tau, std::size_t n)
{
    if (n_nodes == 0)
        throw InvalidArgument("gambler's ruin needs N >= 1");
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw InvalidArgument("effective infection rate tau must be positive and finite");
    if (n > n_nodes)
        throw InvalidArgument("initial infected count n = " + std::to_string(n) + " exceeds N = " +
                              std::to_string(n_nodes));
}

// log(e^a + e^b) without overflow.
double log_add(double a, double b)
{
    if (a < b)
        std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
}

} // namespace

double log_gamblers_ruin(std::size_t n_nodes, double tau, std::size_t n)
{
    check_ruin_args(n_nodes, tau, n);
    if (n == 0)
        return 0.0;
    if (n == n_nodes)
        return -std::numeric_limits<double>::infinity();

    // log p_m for m = N−n−1 (numerator) and m = N−1 (denominator), streamed
    // with log t_j = log t_{j−1} + log j + log τ.
    const std::size_t num_top = n_nodes - n - 1;
    const double log_tau = std::log(tau);
    double log_term = 0.0; // j = 0
    double log_sum = 0.0;
    double log_num = 0.0;
    for (std::size_t j = 1; j < n_nodes; ++j) {
        log_term += std::log(static_cast<double>(j)) + log_tau;
        log_sum = log_add(log_sum, log_term);
        if (j == num_top)
            log_num = log_sum;
    }
    return log_num - log_sum;
}

double gamblers_ruin(std::size_t n_nodes, double tau, std::size_t n)
{
    return std::exp(log_gamblers_ruin(n_nodes, tau, n));
}

double ruin_asymptotic(std::size_t n_nodes, double tau, std::size_t n)
{
    check_ruin_args(n_nodes, tau, n);
    if (n_nodes < 2)
        throw InvalidArgument("asymptotic ruin needs N >= 2");
    const double m = static_cast<double>(n_nodes - 1);
    if (!(tau > 1.0 / m))
        throw InvalidArgument("asymptotic ruin needs tau > 1/(N-1); below it mu_n tends to 1");
    if (n >= n_nodes)
        throw InvalidArgument("asymptotic ruin needs n < N");
    double log_denominator = static_cast<double>(n) * std::log(m * tau);
    for (std::size_t k = 1; k < n; ++k)
        log_denominator += std::log1p(-static_cast<double>(k) / m);
    return std::exp(-log_denominator);
}

double dieout_approx(NormalizedRate x, std::size_t n)
{
    if (x.value() <= 1.0)
        return 1.0;
    return std::pow(x.value(), -static_cast<double>(n));
}

double survival_function(NormalizedRate x, std::size_t n, double lambda1, double t)
{
    if (x.value() < 1.0)
        throw InvalidArgument("survival function needs x >= 1 (got x = " +
                              std::to_string(x.value()) + ")");
    if (!(lambda1 > 0.0))
        throw InvalidArgument("spectral radius must be positive");
    if (!(t >= 0.0))
        throw InvalidArgument("time must be nonnegative");
    const double q = dieout_approx(x, n);
    return 1.0 - q + q * std::exp(-lambda1 * t);
}

} // namespace episis
