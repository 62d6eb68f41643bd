#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "episis/epidemic.hpp"
#include "episis/graph.hpp"

namespace episis::kernels {

/// The 2^N-state SIS chain in bitmask form: bit j of a state is X_j.
struct FullStateModel {
    FullStateModel(const Graph& g, const EpidemicParams& params);

    std::size_t nodes;
    double beta;
    double delta;
    std::vector<std::uint32_t> neighbor_mask; ///< per node
    std::vector<double> exit_rate;            ///< per state

    std::size_t states() const noexcept { return exit_rate.size(); }
};

/// dp = p^T Q on the full state space, evaluated in pull form (each output
/// state gathers its inflows), so states are independent work items.
void full_state_apply_serial(const FullStateModel& m, std::span<const double> p, std::span<double> dp);
void full_state_apply_parallel(const FullStateModel& m, std::span<const double> p, std::span<double> dp);

/// NIMFA right-hand side: dv_j = −δ v_j + β (1 − v_j) Σ_{k~j} v_k.
void nimfa_rhs_serial(const Graph& g, const EpidemicParams& params, std::span<const double> v,
                      std::span<double> dv);
void nimfa_rhs_parallel(const Graph& g, const EpidemicParams& params, std::span<const double> v,
                        std::span<double> dv);

} // namespace episis::kernels
