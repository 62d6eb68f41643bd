#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "episis/epidemic.hpp"
#include "episis/graph.hpp"

namespace episis {

/// Hard cap on the exact solver: 2^13 = 8192 states.
inline constexpr std::size_t full_state_max_nodes = 13;

struct FullStateOptions {
    Rk4Options rk4{};
    bool parallel = true;
};

struct FullStateSolution {
    std::vector<double> times;
    std::vector<double> dieout;     ///< Pr[all healthy]
    std::vector<double> prevalence; ///< E[S(t)]
    double step = 0.0;
};

/// Exact SIS on an arbitrary small graph by integrating the full 2^N-state
/// Markov chain. Throws CapacityError for N > 13.
FullStateSolution full_state_solver(const Graph& g, const EpidemicParams& params,
                                    std::span<const NodeId> initial_set,
                                    std::span<const double> times,
                                    const FullStateOptions& options = {});

} // namespace episis
