#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "episis/epidemic.hpp"
#include "episis/graph.hpp"
#include "episis/ruin.hpp"

namespace episis {

struct NimfaOptions {
    Rk4Options rk4{};
    /// Evaluate the right-hand side with the OpenMP kernel.
    bool parallel = false;
};

/// Trajectories v_j(t) of the N-intertwined mean-field ODEs.
struct NimfaSolution {
    std::vector<double> times;
    std::vector<std::vector<double>> v; ///< v[k][j] at times[k]
    std::vector<double> y1;             ///< (1/N) Σ_j v_j(t)
    double step = 0.0;
};

/// Integrates dv_j/dt = −δ v_j + β Σ_k a_kj v_k − β Σ_k a_kj v_j v_k with RK4.
/// Throws NumericError if any v_j leaves [−1e−12, 1 + 1e−12].
NimfaSolution solve_nimfa(const Graph& g, const EpidemicParams& params, std::span<const double> v0,
                          std::span<const double> times, const NimfaOptions& options = {});

/// v_j(0) = n/N for every node.
std::vector<double> uniform_initial_state(std::size_t nodes, std::size_t n_infected);

struct NimfaSteadyState {
    std::vector<double> v;
    double residual = 0.0; ///< max_j |RHS_j(v)|
    std::size_t iterations = 0;
    double x = 0.0;              ///< τ·λ1 used
    bool near_threshold = false; ///< |x − 1| < 1e−3: convergence is slow here
};

/// Fixed point of the NIMFA right-hand side by damped iteration
/// v <- (1 − ω) v + ω G(v), G_j(v) = β s_j / (δ + β s_j), s_j = Σ_k a_kj v_k,
/// with ω = 0.5 from v = (1 − 1/x)·1. Zero vector for x <= 1.
NimfaSteadyState nimfa_steady_state(const Graph& g, const EpidemicParams& params, double tol = 1e-10,
                                    std::size_t max_iterations = 1'000'000);

/// Pointwise y¹(t)·f(t) with the die-out survival function f. Requires x >= 1.
std::vector<double> corrected_prevalence(const NimfaSolution& sol, NormalizedRate x, std::size_t n,
                                         double lambda1);

/// CSV `t,y1,f,y_corrected`, plus `v_0..v_{N-1}` when `per_node`. The f and
/// y_corrected cells are empty when x < 1.
void write_nimfa_csv(std::ostream& out, const NimfaSolution& sol, NormalizedRate x, std::size_t n,
                     double lambda1, bool per_node = false);

} // namespace episis
