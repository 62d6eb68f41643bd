#include "episis/kernels.hpp"

#include <bit>

namespace episis::kernels {

FullStateModel::FullStateModel(const Graph& g, const EpidemicParams& params)
    : nodes(g.node_count()), beta(params.beta), delta(params.delta), neighbor_mask(nodes, 0u)
{
    for (NodeId j = 0; j < nodes; ++j)
        for (NodeId k : g.neighbors(j))
            neighbor_mask[j] |= 1u << k;

    const std::uint32_t count = 1u << nodes;
    exit_rate.resize(count);
    for (std::uint32_t x = 0; x < count; ++x) {
        double infect = 0.0;
        for (std::size_t j = 0; j < nodes; ++j)
            if (!(x >> j & 1u))
                infect += std::popcount(x & neighbor_mask[j]);
        exit_rate[x] = delta * std::popcount(x) + beta * infect;
    }
}

namespace {

inline double gather(const FullStateModel& m, std::span<const double> p, std::uint32_t x)
{
    double v = -m.exit_rate[x] * p[x];
    for (std::size_t j = 0; j < m.nodes; ++j) {
        const std::uint32_t bit = 1u << j;
        if (x & bit) {
            // j was infected from y = x \ {j}; its infected neighbours are the same in y.
            const int c = std::popcount(x & m.neighbor_mask[j]);
            if (c)
                v += m.beta * c * p[x ^ bit];
        } else {
            v += m.delta * p[x | bit];
        }
    }
    return v;
}

inline double nimfa_node(const Graph& g, const EpidemicParams& params, std::span<const double> v,
                         NodeId j)
{
    double pressure = 0.0;
    for (NodeId k : g.neighbors(j))
        pressure += v[k];
    return -params.delta * v[j] + params.beta * (1.0 - v[j]) * pressure;
}

} // namespace

void full_state_apply_serial(const FullStateModel& m, std::span<const double> p, std::span<double> dp)
{
    const auto count = static_cast<std::uint32_t>(m.states());
    for (std::uint32_t x = 0; x < count; ++x)
        dp[x] = gather(m, p, x);
}

void full_state_apply_parallel(const FullStateModel& m, std::span<const double> p, std::span<double> dp)
{
    const auto count = static_cast<std::int64_t>(m.states());
#pragma omp parallel for schedule(static)
    for (std::int64_t x = 0; x < count; ++x)
        dp[x] = gather(m, p, static_cast<std::uint32_t>(x));
}

void nimfa_rhs_serial(const Graph& g, const EpidemicParams& params, std::span<const double> v,
                      std::span<double> dv)
{
    const auto n = static_cast<NodeId>(g.node_count());
    for (NodeId j = 0; j < n; ++j)
        dv[j] = nimfa_node(g, params, v, j);
}

void nimfa_rhs_parallel(const Graph& g, const EpidemicParams& params, std::span<const double> v,
                        std::span<double> dv)
{
    const auto n = static_cast<std::int64_t>(g.node_count());
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < n; ++j)
        dv[j] = nimfa_node(g, params, v, static_cast<NodeId>(j));
}

} // namespace episis::kernels
