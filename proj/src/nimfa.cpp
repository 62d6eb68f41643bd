#include "episis/nimfa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "episis/csv.hpp"
#include "episis/kernels.hpp"
#include "episis/rk4.hpp"

namespace episis {

NimfaSolution solve_nimfa(const Graph& g, const EpidemicParams& params, std::span<const double> v0,
                          std::span<const double> times, const NimfaOptions& options)
{
    params.validate();
    detail::check_time_grid(times);
    const std::size_t n = g.node_count();
    if (v0.size() != n)
        throw InvalidArgument("initial NIMFA vector has " + std::to_string(v0.size()) +
                              " entries for " + std::to_string(n) + " nodes");
    for (double v : v0)
        if (!(v >= 0.0 && v <= 1.0))
            throw InvalidArgument("initial NIMFA probabilities must lie in [0, 1]");

    NimfaSolution sol;
    sol.times.assign(times.begin(), times.end());
    sol.v.resize(times.size());
    sol.y1.resize(times.size());
    // Jacobian row j: |−δ − β s_j| + β (1 − v_j) deg_j <= δ + 2β·deg_j.
    sol.step = detail::effective_step(
        options.rk4, params.delta + 2.0 * params.beta * static_cast<double>(g.max_degree()));

    auto rhs = [&](const std::vector<double>& y, std::vector<double>& dy) {
        if (options.parallel)
            kernels::nimfa_rhs_parallel(g, params, y, dy);
        else
            kernels::nimfa_rhs_serial(g, params, y, dy);
    };
    detail::integrate_rk4(
        std::vector<double>(v0.begin(), v0.end()), times, sol.step, rhs,
        [&](std::size_t k, std::vector<double>& y) {
            for (auto& v : y) {
                if (!(v >= -1e-12 && v <= 1.0 + 1e-12))
                    throw NumericError("NIMFA probability " + std::to_string(v) + " at t = " +
                                       std::to_string(times[k]) +
                                       " left [0, 1]; reduce the integration step (h = " +
                                       std::to_string(sol.step) + ")");
                v = std::clamp(v, 0.0, 1.0);
            }
            sol.y1[k] = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
            sol.v[k] = y;
        });
    return sol;
}

std::vector<double> uniform_initial_state(std::size_t nodes, std::size_t n_infected)
{
    if (nodes == 0 || n_infected > nodes)
        throw InvalidArgument("need 0 <= n <= N with N >= 1");
    return std::vector<double>(nodes, static_cast<double>(n_infected) / static_cast<double>(nodes));
}

namespace {

double rhs_residual(const Graph& g, const EpidemicParams& params, const std::vector<double>& v)
{
    std::vector<double> dv(v.size());
    kernels::nimfa_rhs_serial(g, params, v, dv);
    double r = 0.0;
    for (double d : dv)
        r = std::max(r, std::abs(d));
    return r;
}

} // namespace

NimfaSteadyState nimfa_steady_state(const Graph& g, const EpidemicParams& params, double tol,
                                    std::size_t max_iterations)
{
    params.validate();
    if (!(tol > 0.0))
        throw InvalidArgument("steady-state tolerance must be positive");
    const std::size_t n = g.node_count();
    NimfaSteadyState out;
    const double lambda1 = spectral_radius(g).value;
    out.x = params.tau() * lambda1;
    out.near_threshold = std::abs(out.x - 1.0) < 1e-3;
    if (out.x <= 1.0) {
        out.v.assign(n, 0.0);
        return out;
    }

    constexpr double omega = 0.5;
    std::vector<double> v(n, 1.0 - 1.0 / out.x), next(n);
    for (std::size_t it = 1; it <= max_iterations; ++it) {
        for (NodeId j = 0; j < n; ++j) {
            double s = 0.0;
            for (NodeId k : g.neighbors(j))
                s += v[k];
            const double bs = params.beta * s;
            const double fixed = bs > 0.0 ? bs / (params.delta + bs) : 0.0;
            next[j] = (1.0 - omega) * v[j] + omega * fixed;
        }
        v.swap(next);
        out.iterations = it;
        if (it % 16 == 0 || it == max_iterations) {
            out.residual = rhs_residual(g, params, v);
            if (out.residual <= tol) {
                out.v = std::move(v);
                return out;
            }
        }
    }
    throw NumericError("NIMFA steady state did not converge in " + std::to_string(max_iterations) +
                       " iterations (residual " + std::to_string(out.residual) + ")");
}

std::vector<double> corrected_prevalence(const NimfaSolution& sol, NormalizedRate x, std::size_t n,
                                         double lambda1)
{
    std::vector<double> y(sol.times.size());
    for (std::size_t k = 0; k < y.size(); ++k)
        y[k] = sol.y1[k] * survival_function(x, n, lambda1, sol.times[k]);
    return y;
}

void write_nimfa_csv(std::ostream& out, const NimfaSolution& sol, NormalizedRate x, std::size_t n,
                     double lambda1, bool per_node)
{
    const bool corrected = x.value() >= 1.0;
    out << "t,y1,f,y_corrected";
    if (per_node)
        for (std::size_t j = 0; j < (sol.v.empty() ? 0 : sol.v.front().size()); ++j)
            out << ",v_" << j;
    out << '\n';
    for (std::size_t k = 0; k < sol.times.size(); ++k) {
        const double f = corrected ? survival_function(x, n, lambda1, sol.times[k]) : std::nan("");
        out << csv::num(sol.times[k]) << ',' << csv::num(sol.y1[k]) << ',' << csv::num(f) << ','
            << csv::num(corrected ? sol.y1[k] * f : std::nan(""));
        if (per_node)
            for (double v : sol.v[k])
                out << ',' << csv::num(v);
        out << '\n';
    }
}

} // namespace episis
