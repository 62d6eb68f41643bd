#include "episis/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "episis/birth_death.hpp"
#include "episis/config.hpp"
#include "episis/csv.hpp"
#include "episis/experiment.hpp"
#include "episis/full_state.hpp"
#include "episis/gillespie.hpp"
#include "episis/nimfa.hpp"
#include "episis/ruin.hpp"

namespace episis::cli {

namespace {

/// Rate flags shared by the dynamic subcommands.
struct RateFlags {
    std::optional<double> tau;
    std::optional<double> x;
    std::optional<double> beta;
    double delta = 1.0;

    void attach(CLI::App& app)
    {
        app.add_option("--tau", tau, "effective infection rate beta/delta");
        app.add_option("--x", x, "normalized rate tau*lambda1");
        app.add_option("--beta", beta, "infection rate per S-I link");
        app.add_option("--delta", delta, "curing rate")->capture_default_str();
    }

    /// Resolves to (params, x) given the graph's spectral radius.
    std::pair<EpidemicParams, double> resolve(double lambda1) const
    {
        const int given = tau.has_value() + x.has_value() + beta.has_value();
        if (given != 1)
            throw InvalidArgument("give exactly one of --tau, --x, --beta");
        if (!(delta > 0.0))
            throw InvalidArgument("--delta must be > 0");
        double t = 0.0;
        if (tau)
            t = *tau;
        else if (beta)
            t = *beta / delta;
        else {
            if (!(lambda1 > 0.0))
                throw InvalidArgument("--x needs a graph with at least one edge");
            t = *x / lambda1;
        }
        if (!(t >= 0.0))
            throw InvalidArgument("infection rate must be >= 0");
        return {EpidemicParams::from_tau(t, delta), t * lambda1};
    }
};

struct Output {
    std::string path;

    /// Runs `body` against the chosen stream (file or stdout).
    template <typename F>
    void write(std::ostream& out, F&& body) const
    {
        if (path.empty()) {
            body(out);
            return;
        }
        std::ofstream file(path, std::ios::binary);
        if (!file)
            throw InvalidArgument("cannot write " + path);
        body(file);
    }
};

std::vector<double> resolve_grid(const std::string& grid, double t_max)
{
    if (!grid.empty())
        return GridSpec::parse(grid).values();
    return make_grid(0.0, 1.0, t_max);
}

double graph_lambda1(const GraphSpec& spec, const Graph& g)
{
    if (spec.family == GraphSpec::Family::complete)
        return static_cast<double>(g.node_count() - 1);
    return spectral_radius(g).value;
}

Graph single_graph(const GraphSpec& spec)
{
    auto graphs = build_graphs(spec);
    if (graphs.size() != 1)
        throw InvalidArgument("expected exactly one graph");
    return std::move(graphs.front().graph);
}

std::vector<NodeId> first_nodes(std::size_t n)
{
    std::vector<NodeId> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = static_cast<NodeId>(i);
    return v;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Die-out probability of Markovian SIS epidemics on networks", "episis"};
    app.set_version_flag("--version", version);
    app.require_subcommand(1);

    // formula
    double f_x = 0.0;
    std::size_t f_n = 0;
    auto* formula = app.add_subcommand("formula", "die-out approximation min(1, x^-n)");
    formula->add_option("--x", f_x, "normalized rate tau*lambda1")->required();
    formula->add_option("--n", f_n, "initially infected nodes")->required();

    // ruin
    std::size_t r_N = 0, r_n = 0;
    std::optional<double> r_tau, r_x;
    bool r_asymptotic = false;
    auto* ruin = app.add_subcommand("ruin", "gambler's ruin probability on K_N");
    ruin->add_option("--N", r_N, "number of nodes")->required();
    ruin->add_option("--tau", r_tau, "effective infection rate");
    ruin->add_option("--x", r_x, "normalized rate (tau = x/(N-1))");
    ruin->add_option("--n", r_n, "initially infected nodes")->required();
    ruin->add_flag("--asymptotic", r_asymptotic, "large-tau asymptotic form");

    // chain
    std::size_t c_N = 0, c_n = 1;
    RateFlags c_rate;
    std::string c_grid = "0:1:45";
    double c_step = 0.01;
    bool c_trace = false;
    Output c_out;
    auto* chain = app.add_subcommand("chain", "exact birth-death chain on K_N");
    chain->add_option("--N", c_N, "number of nodes")->required();
    c_rate.attach(*chain);
    chain->add_option("--n", c_n, "initially infected nodes")->capture_default_str();
    chain->add_option("--grid", c_grid, "output grid start:step:stop")->capture_default_str();
    chain->add_option("--step", c_step, "RK4 step")->capture_default_str();
    chain->add_flag("--trace", c_trace, "emit t,s_0,y instead of the full distribution");
    chain->add_option("--out", c_out.path, "output CSV (default stdout)");

    // simulate
    std::string s_graph;
    RateFlags s_rate;
    std::size_t s_n = 1, s_R = 10000;
    std::string s_init = "fixed", s_grid;
    std::uint64_t s_seed = 1;
    double s_tmax = 45.0;
    std::optional<double> s_sample;
    int s_threads = 0;
    Output s_out;
    auto* simulate = app.add_subcommand("simulate", "Gillespie ensemble");
    simulate->add_option("--graph", s_graph, "complete:N | er:N:p[:seed] | powerlaw:N:exp[:seed] | file:PATH")
        ->required();
    s_rate.attach(*simulate);
    simulate->add_option("--n", s_n, "initially infected nodes")->capture_default_str();
    simulate->add_option("--init", s_init, "fixed | random")
        ->check(CLI::IsMember({"fixed", "random"}))
        ->capture_default_str();
    simulate->add_option("--realizations", s_R, "number of realizations")->capture_default_str();
    simulate->add_option("--seed", s_seed, "master seed")->capture_default_str();
    simulate->add_option("--t-max", s_tmax, "horizon when no grid is given")->capture_default_str();
    simulate->add_option("--grid", s_grid, "output grid start:step:stop");
    simulate->add_option("--sample-time", s_sample, "report die-out at this grid time");
    simulate->add_option("--threads", s_threads, "worker threads (0 = all)")->capture_default_str();
    simulate->add_option("--out", s_out.path, "output CSV (default stdout)");

    // nimfa
    std::string m_graph, m_grid;
    RateFlags m_rate;
    std::size_t m_n = 1;
    double m_tmax = 45.0, m_step = 0.01;
    bool m_per_node = false;
    Output m_out;
    auto* nimfa = app.add_subcommand("nimfa", "NIMFA and die-out-corrected prevalence");
    nimfa->add_option("--graph", m_graph, "graph spec")->required();
    m_rate.attach(*nimfa);
    nimfa->add_option("--n", m_n, "initially infected nodes (v_j(0) = n/N)")->capture_default_str();
    nimfa->add_option("--t-max", m_tmax, "horizon when no grid is given")->capture_default_str();
    nimfa->add_option("--grid", m_grid, "output grid start:step:stop");
    nimfa->add_option("--step", m_step, "RK4 step")->capture_default_str();
    nimfa->add_flag("--per-node", m_per_node, "add v_j columns");
    nimfa->add_option("--out", m_out.path, "output CSV (default stdout)");

    // full-state
    std::string fs_graph, fs_grid = "0:1:10";
    RateFlags fs_rate;
    std::size_t fs_n = 1;
    Output fs_out;
    auto* full = app.add_subcommand("full-state", "exact 2^N-state chain (N <= 13)");
    full->add_option("--graph", fs_graph, "graph spec")->required();
    fs_rate.attach(*full);
    full->add_option("--n", fs_n, "nodes 0..n-1 start infected")->capture_default_str();
    full->add_option("--grid", fs_grid, "output grid start:step:stop")->capture_default_str();
    full->add_option("--out", fs_out.path, "output CSV (default stdout)");

    // experiment
    std::string e_target, e_out;
    double e_scale = 1.0;
    std::optional<int> e_threads;
    bool e_emit = false;
    auto* experiment = app.add_subcommand("experiment", "run a preset or config file");
    experiment->add_option("target", e_target, "preset name or config path")->required();
    experiment->add_option("--out", e_out, "output directory");
    experiment->add_option("--scale", e_scale, "realization multiplier")->capture_default_str();
    experiment->add_option("--threads", e_threads, "worker threads (0 = all)");
    experiment->add_flag("--emit-config", e_emit, "print the resolved config and exit");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? success : usage_error;
    }

    try {
        if (*formula) {
            out << csv::num(dieout_approx(NormalizedRate(f_x), f_n)) << '\n';
        } else if (*ruin) {
            if (r_tau.has_value() == r_x.has_value())
                throw InvalidArgument("give exactly one of --tau, --x");
            if (r_N < 2 && r_x)
                throw InvalidArgument("--x needs N >= 2");
            const double tau = r_tau ? *r_tau : *r_x / static_cast<double>(r_N - 1);
            const double mu = r_asymptotic ? ruin_asymptotic(r_N, tau, r_n)
                                           : gamblers_ruin(r_N, tau, r_n);
            out << csv::num(mu) << '\n';
        } else if (*chain) {
            const auto [params, x] = c_rate.resolve(static_cast<double>(c_N ? c_N - 1 : 0));
            const BirthDeathGenerator gen(c_N, params);
            const auto sol = solve_transient(gen, c_n, GridSpec::parse(c_grid).values(),
                                             {c_step, true});
            c_out.write(out, [&](std::ostream& os) {
                if (!c_trace) {
                    write_chain_csv(os, sol);
                    return;
                }
                const auto y = prevalence_trace(sol);
                os << "t,s_0,y\n";
                for (std::size_t k = 0; k < sol.times.size(); ++k)
                    os << csv::num(sol.times[k]) << ',' << csv::num(sol.states[k][0]) << ','
                       << csv::num(y[k]) << '\n';
            });
        } else if (*simulate) {
            const auto spec = GraphSpec::parse(s_graph);
            const Graph g = single_graph(spec);
            const auto [params, x] = s_rate.resolve(graph_lambda1(spec, g));
            EnsembleOptions eo;
            eo.realizations = s_R;
            eo.master_seed = s_seed;
            eo.grid = resolve_grid(s_grid, s_tmax);
            eo.threads = s_threads;
            const auto init = s_init == "random" ? InitPolicy::random(s_n)
                                                 : InitPolicy::fixed(first_nodes(s_n));
            const auto stats = run_ensemble(g, params, init, eo);
            s_out.write(out, [&](std::ostream& os) { write_ensemble_csv(os, stats); });
            if (s_sample || !s_out.path.empty()) {
                const double t = s_sample.value_or(eo.grid.back());
                const auto d = dieout_at(stats, t);
                (s_out.path.empty() ? err : out)
                    << "x = " << csv::num(x) << ", dieout(t = " << csv::num(t)
                    << ") = " << csv::num(d.estimate) << " +- " << csv::num(d.ci_halfwidth) << '\n';
            }
        } else if (*nimfa) {
            const auto spec = GraphSpec::parse(m_graph);
            const Graph g = single_graph(spec);
            const double lambda1 = graph_lambda1(spec, g);
            const auto [params, x] = m_rate.resolve(lambda1);
            const auto sol = solve_nimfa(g, params, uniform_initial_state(g.node_count(), m_n),
                                         resolve_grid(m_grid, m_tmax), {{m_step, true}, false});
            if (std::abs(x - 1.0) < 1e-3)
                err << "warning: x = " << csv::num(x)
                    << " is within 1e-3 of the NIMFA threshold; convergence is slow\n";
            m_out.write(out, [&](std::ostream& os) {
                write_nimfa_csv(os, sol, NormalizedRate(std::max(x, 1e-300)), m_n,
                                lambda1 > 0.0 ? lambda1 : 1.0, m_per_node);
            });
        } else if (*full) {
            const auto spec = GraphSpec::parse(fs_graph);
            const Graph g = single_graph(spec);
            const auto [params, x] = fs_rate.resolve(graph_lambda1(spec, g));
            const auto grid = GridSpec::parse(fs_grid).values();
            const auto sol = full_state_solver(g, params, first_nodes(fs_n), grid);
            fs_out.write(out, [&](std::ostream& os) {
                os << "t,dieout,prevalence\n";
                for (std::size_t k = 0; k < grid.size(); ++k)
                    os << csv::num(grid[k]) << ',' << csv::num(sol.dieout[k]) << ','
                       << csv::num(sol.prevalence[k]) << '\n';
            });
        } else if (*experiment) {
            const auto names = preset_names();
            ExperimentConfig config =
                std::find(names.begin(), names.end(), e_target) != names.end()
                    ? parse_config(preset_text(e_target))
                    : load_config(e_target);
            if (e_threads)
                config.threads = *e_threads;
            if (e_emit) {
                out << emit_config(config);
                return success;
            }
            RunOptions ro;
            ro.scale = e_scale;
            ro.out = e_out;
            ro.log = &err;
            const auto result = run_experiment(config, ro);
            for (const auto& f : result.files)
                out << f.string() << '\n';
        }
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const CapacityError& e) {
        err << "capacity: " << e.what() << '\n';
        return capacity_exceeded;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << '\n';
        return numeric_failure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    }
    return success;
}

} // namespace episis::cli
