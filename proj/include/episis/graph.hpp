#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <string>
#include <string_view>
#include <vector>

#include "episis/errors.hpp"
#include "episis/rng.hpp"

namespace episis {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Undirected, unweighted simple graph on nodes [0, N).
///
/// Edges are stored canonically (u < v, sorted, unique) next to a CSR
/// adjacency for the dynamics. Values are immutable after construction.
class Graph {
public:
    /// Builds from an arbitrary edge list. Throws InvalidArgument on
    /// N == 0, self-loops, duplicates (in either orientation) or ids >= N.
    Graph(std::size_t node_count, std::vector<Edge> edges);

    std::size_t node_count() const noexcept { return offsets_.size() - 1; }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    /// Canonical edges, u < v, lexicographically sorted.
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    std::span<const NodeId> neighbors(NodeId u) const noexcept
    {
        return {adjacency_.data() + offsets_[u], adjacency_.data() + offsets_[u + 1]};
    }

    std::size_t degree(NodeId u) const noexcept { return offsets_[u + 1] - offsets_[u]; }
    std::size_t max_degree() const noexcept { return max_degree_; }
    double average_degree() const noexcept;

    bool has_edge(NodeId u, NodeId v) const noexcept;

    friend bool operator==(const Graph& a, const Graph& b)
    {
        return a.node_count() == b.node_count() && a.edges_ == b.edges_;
    }

private:
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> adjacency_;
    std::size_t max_degree_ = 0;
};

Graph complete_graph(std::size_t n);
Graph star_graph(std::size_t leaves);
Graph path_graph(std::size_t n);

/// G_p(N): every pair independently with probability p.
Graph er_graph(std::size_t n, double p, std::uint64_t seed);

/// Degree sequence drawn from Pr[k] ∝ k^-exponent on [1, floor(sqrt(N))],
/// paired by a configuration model that rejects self-loops and multi-edges.
Graph powerlaw_graph(std::size_t n, double exponent, std::uint64_t seed);

namespace detail {

/// Inverse-CDF sampler for Pr[k] ∝ k^-exponent on [1, k_max].
class DegreeSampler {
public:
    DegreeSampler(double exponent, std::size_t k_max);
    std::size_t operator()(Rng& rng) const;
    double probability(std::size_t k) const;

private:
    std::vector<double> cdf_;
};

/// Makes the degree sum even by redrawing the degree of one uniformly chosen
/// node until the parity flips. Returns the redrawn index, or -1 if the sum
/// was already even. Throws InvalidArgument if k_max < 2 (parity is stuck).
long repair_parity(std::vector<std::size_t>& degrees, const DegreeSampler& sampler, Rng& rng);

/// Configuration-model pairing with rejection and re-pairing. Stubs that
/// cannot be placed after repeated shuffles are dropped.
std::vector<Edge> pair_stubs(const std::vector<std::size_t>& degrees, Rng& rng);

} // namespace detail

class SpectralRadiusError : public NumericError {
public:
    SpectralRadiusError(const std::string& what, double last_value, double last_residual)
        : NumericError(what), last_value_(last_value), last_residual_(last_residual) {}
    double last_value() const noexcept { return last_value_; }
    double last_residual() const noexcept { return last_residual_; }

private:
    double last_value_;
    double last_residual_;
};

struct SpectralRadius {
    double value = 0.0;
    /// Residual bound ||A x - value x|| / ||x|| at exit; |value - λ1| is at
    /// most this for the Perron vector reached from a positive start.
    double tolerance = 0.0;
    std::size_t iterations = 0;
};

/// Largest adjacency eigenvalue by power iteration on A + I from the
/// all-ones vector; the identity shift keeps bipartite graphs convergent.
/// Throws SpectralRadiusError after `max_iterations`.
SpectralRadius spectral_radius(const Graph& g, double tol = 1e-10,
                               std::size_t max_iterations = 100000);

Graph load_edge_list(const std::filesystem::path& path);
void save_edge_list(const Graph& g, const std::filesystem::path& path);

/// Parses `u v` lines. An optional leading `# N=<int>` header fixes the node
/// count (needed for isolated nodes); otherwise it is the largest id + 1.
/// Other `#` lines are comments.
Graph parse_edge_list(std::string_view text);
std::string format_edge_list(const Graph& g);

} // namespace episis
