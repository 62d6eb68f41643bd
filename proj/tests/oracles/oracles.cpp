#include "oracles.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

std::vector<double> chain_expm(std::size_t n, double beta, double delta, std::size_t n_init, double t)
{
    const auto m = static_cast<Eigen::Index>(n + 1);
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(m, m); // q(i, j): rate i -> j
    for (Eigen::Index i = 1; i < m; ++i) {
        const double up = beta * double(i) * double(m - 1 - i);
        const double down = delta * double(i);
        if (i + 1 < m)
            q(i, i + 1) = up;
        q(i, i - 1) = down;
        q(i, i) = -(up + down);
    }
    const Eigen::MatrixXd p = (q * t).exp();
    std::vector<double> out(n + 1);
    for (Eigen::Index j = 0; j < m; ++j)
        out[j] = p(static_cast<Eigen::Index>(n_init), j);
    return out;
}

std::pair<double, double> full_state_expm(std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                                          double beta, double delta, std::uint32_t initial_mask, double t)
{
    const auto states = Eigen::Index(1) << n;
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(states, states);
    for (Eigen::Index s = 0; s < states; ++s) {
        for (std::size_t v = 0; v < n; ++v) {
            const auto bit = Eigen::Index(1) << v;
            if (s & bit) {
                q(s, s ^ bit) += delta;
            } else {
                int infected_nbrs = 0;
                for (const auto& [a, b] : edges) {
                    if (a == v && (s >> b & 1)) ++infected_nbrs;
                    if (b == v && (s >> a & 1)) ++infected_nbrs;
                }
                q(s, s | bit) += beta * infected_nbrs;
            }
        }
        q(s, s) = -q.row(s).sum();
    }
    const Eigen::MatrixXd p = (q * t).exp();
    double prevalence = 0.0;
    for (Eigen::Index s = 0; s < states; ++s)
        prevalence += p(initial_mask, s) * double(__builtin_popcountll(static_cast<unsigned long long>(s)));
    return {p(initial_mask, 0), prevalence / double(n)};
}

std::vector<long double> ruin_log_linear_system(std::size_t n, double tau)
{
    // Backward sweep of the tridiagonal system from mu_N = 0 gives
    // mu_i = a_i mu_{i-1}. With r_i = 1 - a_i carried separately every update
    // is a ratio of positive terms, so nothing cancels:
    //   a_i = d_i / (d_i + b_i r_{i+1}),  r_i = b_i r_{i+1} / (d_i + b_i r_{i+1}).
    std::vector<long double> log_mu(n + 1, 0.0L);
    if (n == 0)
        return log_mu;
    std::vector<long double> log_a(n + 1, 0.0L);
    long double r = 1.0L; // r_N: a_N = 0
    for (std::size_t i = n - 1; i >= 1; --i) {
        const long double b = static_cast<long double>(tau) * i * (n - i);
        const long double d = i;
        log_a[i] = -std::log1p(b * r / d);
        r = b * r / (d + b * r);
    }
    for (std::size_t i = 1; i < n; ++i)
        log_mu[i] = log_mu[i - 1] + log_a[i];
    log_mu[n] = -std::numeric_limits<long double>::infinity();
    return log_mu;
}

double dense_spectral_radius(std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges)
{
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(Eigen::Index(n), Eigen::Index(n));
    for (const auto& [u, v] : edges)
        a(u, v) = a(v, u) = 1.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

}
