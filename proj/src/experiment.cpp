#include "episis/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "episis/birth_death.hpp"
#include "episis/csv.hpp"
#include "episis/full_state.hpp"
#include "episis/gillespie.hpp"
#include "episis/nimfa.hpp"
#include "episis/ruin.hpp"

namespace episis {

namespace {

std::string short_num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::ofstream open_csv(const std::filesystem::path& path, ExperimentResult& result)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InvalidArgument("cannot write " + path.string());
    result.files.push_back(path);
    return out;
}

std::size_t grid_index(const std::vector<double>& grid, double t)
{
    for (std::size_t k = 0; k < grid.size(); ++k)
        if (std::abs(grid[k] - t) <= 1e-12 * std::max(1.0, std::abs(t)))
            return k;
    throw InvalidArgument("sample time is not on the grid");
}

std::vector<NodeId> first_nodes(std::size_t n)
{
    std::vector<NodeId> nodes(n);
    for (std::size_t i = 0; i < n; ++i)
        nodes[i] = static_cast<NodeId>(i);
    return nodes;
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options)
{
    config.validate();
    if (!(options.scale > 0.0))
        throw InvalidArgument("scale must be positive");

    const std::filesystem::path root =
        !options.out.empty() ? options.out
                             : std::filesystem::path(config.out.empty() ? config.name : config.out);
    const auto realizations = static_cast<std::size_t>(
        std::max(1.0, std::round(static_cast<double>(config.realizations) * options.scale)));
    const std::vector<double> grid = config.grid.values();
    const std::size_t sample = grid_index(grid, config.sample_time);
    const bool complete = config.graph.family == GraphSpec::Family::complete;

    ExperimentResult result;
    const auto graphs = build_graphs(config.graph);
    for (const auto& [label, g] : graphs) {
        const std::filesystem::path dir = graphs.size() > 1 ? root / label : root;
        std::filesystem::create_directories(dir);
        const std::size_t n_nodes = g.node_count();
        for (auto n : config.n_values)
            if (n > n_nodes)
                throw InvalidArgument("invalid config: initial infected count exceeds N = " +
                                      std::to_string(n_nodes));
        const double lambda1 =
            complete ? static_cast<double>(n_nodes - 1) : spectral_radius(g).value;
        if (!config.x_values.empty() && !(lambda1 > 0.0))
            throw InvalidArgument("graph " + label + " has no edges; x = tau*lambda1 is undefined");
        if (options.log)
            *options.log << "graph " << label << ": N = " << n_nodes << ", edges = "
                         << g.edge_count() << ", lambda1 = " << csv::num(lambda1) << '\n';

        std::vector<std::pair<double, double>> rates; // (x, tau)
        for (double x : config.x_values)
            rates.emplace_back(x, x / lambda1);
        for (double tau : config.tau_values)
            rates.emplace_back(tau * lambda1, tau);

        std::vector<SummaryRow> rows;
        for (const auto& [x, tau] : rates) {
            const auto params = EpidemicParams::from_tau(tau, config.delta);
            for (auto n : config.n_values) {
                const std::string tag = "x" + short_num(x) + "_n" + std::to_string(n);
                const double nan = std::nan("");
                SummaryRow row{x, n, x > 0.0 ? dieout_approx(NormalizedRate(x), n) : 1.0,
                               nan, nan, nan, nan};

                if (config.uses(Method::ruin) && complete)
                    row.dieout_ruin = tau > 0.0 ? gamblers_ruin(n_nodes, tau, n)
                                                : (n < n_nodes ? 1.0 : 0.0);

                if (config.uses(Method::chain)) {
                    const BirthDeathGenerator gen(n_nodes, params);
                    const auto sol = solve_transient(gen, n, grid, {config.step, true});
                    auto states = open_csv(dir / ("chain_" + tag + ".csv"), result);
                    write_chain_csv(states, sol);
                    const auto y = prevalence_trace(sol);
                    auto trace = open_csv(dir / ("chain_trace_" + tag + ".csv"), result);
                    trace << "t,s_0,y\n";
                    for (std::size_t k = 0; k < grid.size(); ++k)
                        trace << csv::num(grid[k]) << ',' << csv::num(sol.states[k][0]) << ','
                              << csv::num(y[k]) << '\n';
                    row.dieout_chain = sol.states[sample][0];
                }

                if (config.uses(Method::full_state)) {
                    const auto initial = first_nodes(n);
                    const auto sol = full_state_solver(g, params, initial, grid,
                                                       {{config.step, true}, true});
                    auto out = open_csv(dir / ("full_state_" + tag + ".csv"), result);
                    out << "t,dieout,prevalence\n";
                    for (std::size_t k = 0; k < grid.size(); ++k)
                        out << csv::num(grid[k]) << ',' << csv::num(sol.dieout[k]) << ','
                            << csv::num(sol.prevalence[k]) << '\n';
                }

                if (config.uses(Method::mc)) {
                    const auto init = config.random_init ? InitPolicy::random(n)
                                                         : InitPolicy::fixed(first_nodes(n));
                    EnsembleOptions eo;
                    eo.realizations = realizations;
                    eo.master_seed = config.mc_seed;
                    eo.grid = grid;
                    eo.threads = config.threads;
                    if (options.log)
                        *options.log << "  mc " << tag << ": R = " << realizations << '\n';
                    const auto stats = run_ensemble(g, params, init, eo);
                    auto out = open_csv(dir / ("mc_" + tag + ".csv"), result);
                    write_ensemble_csv(out, stats);
                    row.dieout_mc = stats.dieout(sample);
                    row.mc_ci = stats.dieout_ci(sample);
                }

                if (config.uses(Method::nimfa)) {
                    const auto v0 = uniform_initial_state(n_nodes, n);
                    const auto sol = solve_nimfa(g, params, v0, grid, {{config.step, true}, false});
                    auto out = open_csv(dir / ("nimfa_" + tag + ".csv"), result);
                    if (x > 0.0 && lambda1 > 0.0)
                        write_nimfa_csv(out, sol, NormalizedRate(x), n, lambda1, config.per_node);
                    else
                        write_nimfa_csv(out, sol, NormalizedRate(0.5), n, 1.0, config.per_node);
                }
                rows.push_back(row);
            }
        }

        auto summary = open_csv(dir / "summary.csv", result);
        summary << "x,n,dieout_formula,dieout_ruin,dieout_chain,dieout_mc,mc_ci\n";
        for (const auto& r : rows)
            summary << csv::num(r.x) << ',' << r.n << ',' << csv::num(r.dieout_formula) << ','
                    << csv::num(r.dieout_ruin) << ',' << csv::num(r.dieout_chain) << ','
                    << csv::num(r.dieout_mc) << ',' << csv::num(r.mc_ci) << '\n';
        result.summaries.emplace_back(label, std::move(rows));
    }
    return result;
}

} // namespace episis
