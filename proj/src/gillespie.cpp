#include "episis/gillespie.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <string>

#include <omp.h>

#include "episis/csv.hpp"
#include "episis/rk4.hpp"

namespace episis {

SisProcess::SisProcess(const Graph& g, const EpidemicParams& params)
    : graph_(&g), params_(params), position_(g.node_count(), npos),
      infected_neighbors_(g.node_count(), 0)
{
    params.validate();
    infected_list_.reserve(g.node_count());
}

void SisProcess::reset(std::span<const NodeId> initial)
{
    for (NodeId v : infected_list_)
        position_[v] = npos;
    infected_list_.clear();
    std::fill(infected_neighbors_.begin(), infected_neighbors_.end(), 0u);
    si_edges_ = 0;
    for (NodeId v : initial) {
        if (v >= graph_->node_count())
            throw InvalidArgument("initial node " + std::to_string(v) + " out of range");
        if (!is_infected(v))
            infect(v);
    }
}

void SisProcess::infect(NodeId v)
{
    position_[v] = static_cast<std::uint32_t>(infected_list_.size());
    infected_list_.push_back(v);
    const auto deg = static_cast<std::uint64_t>(graph_->degree(v));
    const std::uint64_t c = infected_neighbors_[v];
    si_edges_ = si_edges_ + deg - 2 * c;
    for (NodeId w : graph_->neighbors(v))
        ++infected_neighbors_[w];
}

void SisProcess::cure(NodeId v)
{
    const std::uint32_t pos = position_[v];
    const NodeId moved = infected_list_.back();
    infected_list_[pos] = moved;
    position_[moved] = pos;
    infected_list_.pop_back();
    position_[v] = npos;
    const auto deg = static_cast<std::uint64_t>(graph_->degree(v));
    const std::uint64_t c = infected_neighbors_[v];
    si_edges_ = si_edges_ + 2 * c - deg;
    for (NodeId w : graph_->neighbors(v))
        --infected_neighbors_[w];
}

std::uint64_t SisProcess::recount_si_edges() const
{
    std::uint64_t count = 0;
    for (const auto& [u, v] : graph_->edges())
        count += is_infected(u) != is_infected(v);
    return count;
}

void SisProcess::audit() const
{
    const std::uint64_t fresh = recount_si_edges();
    if (fresh != si_edges_)
        throw NumericError("S-I edge bookkeeping drifted: tracked " + std::to_string(si_edges_) +
                           ", recounted " + std::to_string(fresh));
    for (NodeId u = 0; u < graph_->node_count(); ++u) {
        std::uint32_t c = 0;
        for (NodeId w : graph_->neighbors(u))
            c += is_infected(w);
        if (c != infected_neighbors_[u])
            throw NumericError("infected-neighbour count drifted at node " + std::to_string(u));
    }
}

SisProcess::RunResult SisProcess::run(std::span<const double> grid, double t_max, Rng& rng,
                                      std::span<std::uint32_t> counts,
                                      std::vector<TransitionEvent>* log,
                                      std::uint64_t audit_interval, std::uint64_t event_limit)
{
    RunResult result;
    const double delta = params_.delta;
    const double beta = params_.beta;
    const auto max_degree = static_cast<double>(graph_->max_degree());
    std::size_t gi = 0;
    double t = 0.0;

    while (true) {
        const std::size_t infected = infected_list_.size();
        if (infected == 0) {
            result.absorbed_at = t;
            for (; gi < grid.size(); ++gi)
                counts[gi] = 0;
            return result;
        }
        const double cure_rate = delta * static_cast<double>(infected);
        const double rate = cure_rate + beta * static_cast<double>(si_edges_);
        const double t_next = t + rng.exponential(rate);
        for (; gi < grid.size() && grid[gi] < t_next; ++gi)
            counts[gi] = static_cast<std::uint32_t>(infected);
        if (t_next > t_max)
            return result;
        if (result.events == event_limit) {
            result.truncated = true;
            return result;
        }
        t = t_next;

        if (rng.uniform() * rate < cure_rate) {
            const NodeId v = infected_list_[rng.index(infected)];
            cure(v);
            if (log)
                log->push_back({t, v, false});
        } else {
            NodeId target = 0;
            while (true) {
                const NodeId u = infected_list_[rng.index(infected)];
                const auto deg = graph_->degree(u);
                if (rng.uniform() * max_degree >= static_cast<double>(deg))
                    continue;
                const NodeId w = graph_->neighbors(u)[rng.index(deg)];
                if (!is_infected(w)) {
                    target = w;
                    break;
                }
            }
            infect(target);
            if (log)
                log->push_back({t, target, true});
        }
        ++result.events;
        if (audit_interval && result.events % audit_interval == 0)
            audit();
    }
}

Trajectory simulate_realization(const Graph& g, const EpidemicParams& params,
                                std::span<const NodeId> initial_set, double t_max,
                                std::uint64_t seed, const RealizationOptions& options)
{
    if (!(t_max >= 0.0))
        throw InvalidArgument("t_max must be nonnegative");
    Trajectory traj;
    traj.grid = options.grid.empty() ? std::vector<double>{0.0} : options.grid;
    for (std::size_t k = 0; k < traj.grid.size(); ++k) {
        if (traj.grid[k] < 0.0 || traj.grid[k] > t_max || (k && !(traj.grid[k] > traj.grid[k - 1])))
            throw InvalidArgument("snapshot grid must be increasing within [0, t_max]");
    }
    traj.infected.assign(traj.grid.size(), 0);

    SisProcess process(g, params);
    process.reset(initial_set);
    Rng rng(seed);
    const auto r = process.run(traj.grid, t_max, rng, traj.infected,
                               options.record_events ? &traj.events : nullptr,
                               options.audit_interval, options.event_limit);
    traj.absorbed_at = r.absorbed_at;
    traj.event_count = r.events;
    traj.truncated = r.truncated;
    return traj;
}

InitPolicy InitPolicy::fixed(std::vector<NodeId> nodes)
{
    InitPolicy p;
    std::sort(nodes.begin(), nodes.end());
    if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end())
        throw InvalidArgument("initial node set has duplicates");
    p.nodes_ = std::move(nodes);
    return p;
}

InitPolicy InitPolicy::random(std::size_t n)
{
    InitPolicy p;
    p.random_ = true;
    p.count_ = n;
    return p;
}

void InitPolicy::validate(std::size_t node_count) const
{
    if (random_) {
        if (count_ > node_count)
            throw InvalidArgument("cannot infect " + std::to_string(count_) + " of " +
                                  std::to_string(node_count) + " nodes");
        return;
    }
    for (NodeId v : nodes_)
        if (v >= node_count)
            throw InvalidArgument("initial node " + std::to_string(v) + " out of range");
}

void InitPolicy::draw(std::size_t node_count, Rng& rng, std::vector<NodeId>& out) const
{
    out.clear();
    if (!random_) {
        out = nodes_;
        return;
    }
    // Rejection of repeats; n is small relative to N in every use.
    while (out.size() < count_) {
        const auto v = static_cast<NodeId>(rng.index(node_count));
        if (std::find(out.begin(), out.end(), v) == out.end())
            out.push_back(v);
    }
}

double EnsembleStats::dieout(std::size_t k) const
{
    return static_cast<double>(died.at(k)) / static_cast<double>(realizations);
}

double EnsembleStats::dieout_ci(std::size_t k) const
{
    const double p = dieout(k);
    return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(realizations));
}

double EnsembleStats::prevalence(std::size_t k) const
{
    return static_cast<double>(infected_sum.at(k)) /
           (static_cast<double>(nodes) * static_cast<double>(realizations));
}

double EnsembleStats::cond_prevalence(std::size_t k) const
{
    const std::size_t alive = survivors(k);
    if (alive == 0)
        return std::nan("");
    return static_cast<double>(infected_sum.at(k)) /
           (static_cast<double>(nodes) * static_cast<double>(alive));
}

EventCapExceeded::EventCapExceeded(std::uint64_t cap, EnsembleStats partial)
    : CapacityError("ensemble exceeded its event cap of " + std::to_string(cap) + " events after " +
                    std::to_string(partial.realizations) + " completed realizations"),
      cap_(cap), partial_(std::move(partial))
{
}

namespace {

struct Tally {
    std::vector<std::uint64_t> died;
    std::vector<std::uint64_t> infected_sum;
    std::size_t realizations = 0;
    std::uint64_t events = 0;

    explicit Tally(std::size_t points) : died(points, 0), infected_sum(points, 0) {}

    void add(std::span<const std::uint32_t> counts)
    {
        for (std::size_t k = 0; k < counts.size(); ++k) {
            died[k] += counts[k] == 0;
            infected_sum[k] += counts[k];
        }
        ++realizations;
    }

    void merge(const Tally& other)
    {
        for (std::size_t k = 0; k < died.size(); ++k) {
            died[k] += other.died[k];
            infected_sum[k] += other.infected_sum[k];
        }
        realizations += other.realizations;
        events += other.events;
    }
};

void check_ensemble(const Graph& g, const EpidemicParams& params, const InitPolicy& init,
                    const EnsembleOptions& options)
{
    params.validate();
    init.validate(g.node_count());
    if (options.realizations == 0)
        throw InvalidArgument("ensemble needs at least one realization");
    detail::check_time_grid(options.grid);
}

EnsembleStats to_stats(const Graph& g, const EnsembleOptions& options, Tally&& tally)
{
    EnsembleStats s;
    s.grid = options.grid;
    s.nodes = g.node_count();
    s.realizations = tally.realizations;
    s.died = std::move(tally.died);
    s.infected_sum = std::move(tally.infected_sum);
    s.total_events = tally.events;
    return s;
}

// Shared per-realization body. Returns false when the event budget ran out.
class RealizationRunner {
public:
    RealizationRunner(const Graph& g, const EpidemicParams& params, const InitPolicy& init,
                      const EnsembleOptions& options)
        : g_(g), init_(init), options_(options), process_(g, params),
          counts_(options.grid.size())
    {
    }

    bool run(std::size_t index, std::atomic<std::uint64_t>& used, Tally& tally)
    {
        const std::uint64_t spent = used.load(std::memory_order_relaxed);
        if (spent >= options_.event_cap)
            return false;
        Rng rng(substream_seed(options_.master_seed, index));
        init_.draw(g_.node_count(), rng, initial_);
        process_.reset(initial_);
        const auto r = process_.run(options_.grid, options_.grid.back(), rng, counts_, nullptr,
                                    options_.audit_interval, options_.event_cap - spent);
        used.fetch_add(r.events, std::memory_order_relaxed);
        if (r.truncated)
            return false;
        tally.add(counts_);
        tally.events += r.events;
        return true;
    }

private:
    const Graph& g_;
    const InitPolicy& init_;
    const EnsembleOptions& options_;
    SisProcess process_;
    std::vector<std::uint32_t> counts_;
    std::vector<NodeId> initial_;
};

} // namespace

EnsembleStats run_ensemble_serial(const Graph& g, const EpidemicParams& params,
                                  const InitPolicy& init, const EnsembleOptions& options)
{
    check_ensemble(g, params, init, options);
    Tally tally(options.grid.size());
    RealizationRunner runner(g, params, init, options);
    std::atomic<std::uint64_t> used{0};
    for (std::size_t i = 0; i < options.realizations; ++i)
        if (!runner.run(i, used, tally))
            throw EventCapExceeded(options.event_cap, to_stats(g, options, std::move(tally)));
    return to_stats(g, options, std::move(tally));
}

EnsembleStats run_ensemble(const Graph& g, const EpidemicParams& params, const InitPolicy& init,
                           const EnsembleOptions& options)
{
    check_ensemble(g, params, init, options);
    const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
    const auto count = static_cast<std::int64_t>(options.realizations);

    Tally total(options.grid.size());
    std::atomic<std::uint64_t> used{0};
    std::atomic<bool> capped{false};
    std::atomic<bool> failed{false};
    std::exception_ptr failure;
    std::mutex merge_mutex;

#pragma omp parallel num_threads(threads)
    {
        Tally local(options.grid.size());
        RealizationRunner runner(g, params, init, options);
#pragma omp for schedule(dynamic, 16)
        for (std::int64_t i = 0; i < count; ++i) {
            if (capped.load(std::memory_order_relaxed) || failed.load(std::memory_order_relaxed))
                continue;
            // Exceptions may not cross the worksharing construct; park the first one.
            try {
                if (!runner.run(static_cast<std::size_t>(i), used, local))
                    capped.store(true, std::memory_order_relaxed);
            } catch (...) {
                std::lock_guard lock(merge_mutex);
                if (!failure)
                    failure = std::current_exception();
                failed.store(true);
            }
        }
        std::lock_guard lock(merge_mutex);
        total.merge(local);
    }

    if (failure)
        std::rethrow_exception(failure);
    if (capped)
        throw EventCapExceeded(options.event_cap, to_stats(g, options, std::move(total)));
    return to_stats(g, options, std::move(total));
}

DieoutEstimate dieout_at(const EnsembleStats& stats, double t)
{
    for (std::size_t k = 0; k < stats.grid.size(); ++k)
        if (std::abs(stats.grid[k] - t) <= 1e-12 * std::max(1.0, std::abs(t)))
            return {stats.dieout(k), stats.dieout_ci(k)};
    throw InvalidArgument("t = " + std::to_string(t) + " is not on the ensemble grid");
}

void write_ensemble_csv(std::ostream& out, const EnsembleStats& stats)
{
    out << "t,R,dieout,dieout_ci,prevalence,cond_prevalence\n";
    for (std::size_t k = 0; k < stats.grid.size(); ++k)
        out << csv::num(stats.grid[k]) << ',' << stats.realizations << ','
            << csv::num(stats.dieout(k)) << ',' << csv::num(stats.dieout_ci(k)) << ','
            << csv::num(stats.prevalence(k)) << ',' << csv::num(stats.cond_prevalence(k)) << '\n';
}

} // namespace episis
