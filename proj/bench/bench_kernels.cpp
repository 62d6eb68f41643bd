// Serial reference kernels vs their OpenMP versions.
#include <benchmark/benchmark.h>

#include "episis/birth_death.hpp"
#include "episis/gillespie.hpp"
#include "episis/kernels.hpp"

using namespace episis;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v)
        x = rng.uniform();
    return v;
}

template <auto Apply>
void full_state(benchmark::State& state)
{
    const Graph g = er_graph(static_cast<std::size_t>(state.range(0)), 0.4, 1);
    const kernels::FullStateModel m(g, {0.5, 1.0});
    const auto p = random_vector(m.states(), 2);
    std::vector<double> dp(p.size());
    for (auto _ : state) {
        Apply(m, p, dp);
        benchmark::DoNotOptimize(dp.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.states()));
}

template <auto Rhs>
void nimfa(benchmark::State& state)
{
    const Graph g = powerlaw_graph(static_cast<std::size_t>(state.range(0)), 2.6, 1);
    const auto v = random_vector(g.node_count(), 3);
    std::vector<double> dv(v.size());
    for (auto _ : state) {
        Rhs(g, EpidemicParams{0.3, 1.0}, v, dv);
        benchmark::DoNotOptimize(dv.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.node_count()));
}

template <bool Parallel>
void ensemble(benchmark::State& state)
{
    const Graph g = complete_graph(50);
    EnsembleOptions o;
    o.realizations = static_cast<std::size_t>(state.range(0));
    o.master_seed = 1;
    o.grid = make_grid(0.0, 1.0, 20.0);
    for (auto _ : state) {
        const auto stats = Parallel ? run_ensemble(g, EpidemicParams::from_tau(0.06), InitPolicy::fixed({0}), o)
                                    : run_ensemble_serial(g, EpidemicParams::from_tau(0.06), InitPolicy::fixed({0}), o);
        benchmark::DoNotOptimize(stats.died.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}

BENCHMARK(full_state<kernels::full_state_apply_serial>)->Name("full_state/serial")->Arg(10)->Arg(13);
BENCHMARK(full_state<kernels::full_state_apply_parallel>)->Name("full_state/omp")->Arg(10)->Arg(13);
BENCHMARK(nimfa<kernels::nimfa_rhs_serial>)->Name("nimfa_rhs/serial")->Arg(10000)->Arg(200000);
BENCHMARK(nimfa<kernels::nimfa_rhs_parallel>)->Name("nimfa_rhs/omp")->Arg(10000)->Arg(200000);
BENCHMARK(ensemble<false>)->Name("ensemble/serial")->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(ensemble<true>)->Name("ensemble/omp")->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
