#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "episis/epidemic.hpp"
#include "episis/errors.hpp"
#include "episis/graph.hpp"
#include "episis/rng.hpp"

namespace episis {

struct TransitionEvent {
    double time;
    NodeId node;
    bool infected; ///< new state of `node`

    friend bool operator==(const TransitionEvent&, const TransitionEvent&) = default;
};

/// One realization of the Markovian SIS process.
struct Trajectory {
    std::vector<TransitionEvent> events; ///< empty unless recording was requested
    std::vector<double> grid;
    std::vector<std::uint32_t> infected; ///< infected count at each grid time
    std::optional<double> absorbed_at;
    std::uint64_t event_count = 0;
    bool truncated = false; ///< stopped by the event limit before t_max
};

struct RealizationOptions {
    /// Snapshot times, ascending, all within [0, t_max]. Empty: only t = 0.
    std::vector<double> grid;
    bool record_events = true;
    /// Recount the S-I edges from scratch every this many events (0 = off).
    std::uint64_t audit_interval = 0;
    std::uint64_t event_limit = std::numeric_limits<std::uint64_t>::max();
};

/// Event-driven (Gillespie) SIS state machine on a fixed graph.
///
/// Keeps the infected set, each node's count of infected neighbours and the
/// running number of S-I edges, so the two aggregate rates δ|I| and β·#SI are
/// exact at every step. Infection targets are drawn proportional to their
/// infected-neighbour count by sampling a uniform S-I edge: an infected node
/// is accepted with probability deg/max_deg, then a uniform neighbour is
/// accepted if susceptible. Rejections cost no simulated time.
class SisProcess {
public:
    SisProcess(const Graph& g, const EpidemicParams& params);

    void reset(std::span<const NodeId> initial);

    struct RunResult {
        std::optional<double> absorbed_at;
        std::uint64_t events = 0;
        bool truncated = false;
    };

    /// Runs from t = 0 until absorption or t_max. `counts[k]` receives the
    /// infected count at grid[k] (state after all events at times <= grid[k]).
    RunResult run(std::span<const double> grid, double t_max, Rng& rng,
                  std::span<std::uint32_t> counts, std::vector<TransitionEvent>* log = nullptr,
                  std::uint64_t audit_interval = 0,
                  std::uint64_t event_limit = std::numeric_limits<std::uint64_t>::max());

    std::size_t infected_count() const noexcept { return infected_list_.size(); }
    std::uint64_t si_edges() const noexcept { return si_edges_; }
    bool is_infected(NodeId v) const noexcept { return position_[v] != npos; }
    /// From-scratch recount, for auditing the incremental bookkeeping.
    std::uint64_t recount_si_edges() const;

private:
    static constexpr std::uint32_t npos = std::numeric_limits<std::uint32_t>::max();

    void infect(NodeId v);
    void cure(NodeId v);
    void audit() const;

    const Graph* graph_;
    EpidemicParams params_;
    std::vector<std::uint32_t> position_; ///< index in infected_list_ or npos
    std::vector<NodeId> infected_list_;
    std::vector<std::uint32_t> infected_neighbors_;
    std::uint64_t si_edges_ = 0;
};

Trajectory simulate_realization(const Graph& g, const EpidemicParams& params,
                                std::span<const NodeId> initial_set, double t_max,
                                std::uint64_t seed, const RealizationOptions& options = {});

/// How each realization picks its initially infected nodes.
class InitPolicy {
public:
    /// The same node set in every realization.
    static InitPolicy fixed(std::vector<NodeId> nodes);
    /// n distinct nodes drawn uniformly per realization.
    static InitPolicy random(std::size_t n);

    bool is_random() const noexcept { return random_; }
    std::size_t count() const noexcept { return random_ ? count_ : nodes_.size(); }

    void validate(std::size_t node_count) const;
    void draw(std::size_t node_count, Rng& rng, std::vector<NodeId>& out) const;

private:
    bool random_ = false;
    std::size_t count_ = 0;
    std::vector<NodeId> nodes_;
};

struct EnsembleOptions {
    std::size_t realizations = 1;
    std::uint64_t master_seed = 0;
    /// Output grid; must start at 0. Realizations run to grid.back().
    std::vector<double> grid;
    /// OpenMP worker count; 0 uses the runtime default.
    int threads = 0;
    std::uint64_t event_cap = 1'000'000'000;
    std::uint64_t audit_interval = 0;
};

/// Monte Carlo estimators per grid time. Raw integer tallies are kept so
/// aggregation is exact and independent of execution order.
struct EnsembleStats {
    std::vector<double> grid;
    std::size_t nodes = 0;
    std::size_t realizations = 0;
    std::vector<std::uint64_t> died;         ///< realizations with S(t) = 0
    std::vector<std::uint64_t> infected_sum; ///< Σ over realizations of N·S(t)
    std::uint64_t total_events = 0;

    double dieout(std::size_t k) const;
    /// 95% binomial half-width 1.96·sqrt(p(1−p)/R).
    double dieout_ci(std::size_t k) const;
    double prevalence(std::size_t k) const;
    /// Mean S(t) over surviving realizations; NaN when none survive.
    double cond_prevalence(std::size_t k) const;
    std::size_t survivors(std::size_t k) const { return realizations - died.at(k); }

    friend bool operator==(const EnsembleStats&, const EnsembleStats&) = default;
};

/// Raised when an ensemble exceeds its event budget. Carries the tallies of
/// the realizations that completed.
class EventCapExceeded : public CapacityError {
public:
    EventCapExceeded(std::uint64_t cap, EnsembleStats partial);
    std::uint64_t cap() const noexcept { return cap_; }
    const EnsembleStats& partial() const noexcept { return partial_; }

private:
    std::uint64_t cap_;
    EnsembleStats partial_;
};

/// Runs R independent realizations across OpenMP threads. Realization i uses
/// substream_seed(master_seed, i); results are bit-identical for any thread count.
EnsembleStats run_ensemble(const Graph& g, const EpidemicParams& params, const InitPolicy& init,
                           const EnsembleOptions& options);

/// Single-threaded reference for run_ensemble.
EnsembleStats run_ensemble_serial(const Graph& g, const EpidemicParams& params,
                                  const InitPolicy& init, const EnsembleOptions& options);

struct DieoutEstimate {
    double estimate;
    double ci_halfwidth;
};

/// Die-out fraction at grid time t (no interpolation; off-grid t throws).
DieoutEstimate dieout_at(const EnsembleStats& stats, double t);

/// CSV `t,R,dieout,dieout_ci,prevalence,cond_prevalence`.
void write_ensemble_csv(std::ostream& out, const EnsembleStats& stats);

} // namespace episis
