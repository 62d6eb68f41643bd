#include "episis/full_state.hpp"

#include <algorithm>
#include <bit>

#include "episis/kernels.hpp"
#include "episis/rk4.hpp"

namespace episis {

FullStateSolution full_state_solver(const Graph& g, const EpidemicParams& params,
                                    std::span<const NodeId> initial_set,
                                    std::span<const double> times, const FullStateOptions& options)
{
    const std::size_t n = g.node_count();
    if (n > full_state_max_nodes)
        throw CapacityError("full-state solver is capped at N <= " +
                            std::to_string(full_state_max_nodes) + " (2^N states); got N = " +
                            std::to_string(n));
    params.validate();
    detail::check_time_grid(times);

    std::uint32_t start = 0;
    for (NodeId j : initial_set) {
        if (j >= n)
            throw InvalidArgument("initial node " + std::to_string(j) + " out of range");
        start |= 1u << j;
    }

    const kernels::FullStateModel model(g, params);
    FullStateSolution sol;
    sol.times.assign(times.begin(), times.end());
    sol.dieout.resize(times.size());
    sol.prevalence.resize(times.size());
    sol.step = detail::effective_step(
        options.rk4, 2.0 * *std::max_element(model.exit_rate.begin(), model.exit_rate.end()));

    std::vector<double> p0(model.states(), 0.0);
    p0[start] = 1.0;
    auto rhs = [&](const std::vector<double>& y, std::vector<double>& dy) {
        if (options.parallel)
            kernels::full_state_apply_parallel(model, y, dy);
        else
            kernels::full_state_apply_serial(model, y, dy);
    };
    detail::integrate_rk4(std::move(p0), times, sol.step, rhs,
                          [&](std::size_t k, std::vector<double>& y) {
                              detail::condition_distribution(y, times[k], sol.step,
                                                             "full-state solve");
                              double infected = 0.0;
                              for (std::uint32_t x = 1; x < y.size(); ++x)
                                  infected += std::popcount(x) * y[x];
                              sol.dieout[k] = y[0];
                              sol.prevalence[k] = infected / static_cast<double>(n);
                          });
    return sol;
}

} // namespace episis
