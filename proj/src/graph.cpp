#include "episis/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

namespace episis {

Graph::Graph(std::size_t node_count, std::vector<Edge> edges)
{
    if (node_count == 0)
        throw InvalidArgument("graph must have at least one node");
    if (node_count > std::size_t{std::numeric_limits<NodeId>::max()})
        throw InvalidArgument("graph too large for 32-bit node ids");

    for (auto& [u, v] : edges) {
        if (u >= node_count || v >= node_count)
            throw InvalidArgument("edge (" + std::to_string(u) + "," + std::to_string(v) +
                                  ") has a node id outside [0, " + std::to_string(node_count) + ")");
        if (u == v)
            throw InvalidArgument("self-loop at node " + std::to_string(u));
        if (u > v)
            std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    auto dup = std::adjacent_find(edges.begin(), edges.end());
    if (dup != edges.end())
        throw InvalidArgument("duplicate edge (" + std::to_string(dup->first) + "," +
                              std::to_string(dup->second) + ")");
    edges_ = std::move(edges);

    offsets_.assign(node_count + 1, 0);
    for (const auto& [u, v] : edges_) {
        ++offsets_[u + 1];
        ++offsets_[v + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    adjacency_.resize(offsets_.back());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const auto& [u, v] : edges_) {
        adjacency_[cursor[u]++] = v;
        adjacency_[cursor[v]++] = u;
    }
    for (std::size_t u = 0; u < node_count; ++u) {
        std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[u]),
                  adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[u + 1]));
        max_degree_ = std::max(max_degree_, offsets_[u + 1] - offsets_[u]);
    }
}

double Graph::average_degree() const noexcept
{
    return 2.0 * static_cast<double>(edge_count()) / static_cast<double>(node_count());
}

bool Graph::has_edge(NodeId u, NodeId v) const noexcept
{
    if (u >= node_count() || v >= node_count())
        return false;
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

Graph complete_graph(std::size_t n)
{
    if (n == 0)
        throw InvalidArgument("complete graph needs N >= 1");
    std::vector<Edge> edges;
    edges.reserve(n * (n - 1) / 2);
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            edges.emplace_back(u, v);
    return Graph(n, std::move(edges));
}

Graph star_graph(std::size_t leaves)
{
    std::vector<Edge> edges;
    for (NodeId v = 1; v <= leaves; ++v)
        edges.emplace_back(0, v);
    return Graph(leaves + 1, std::move(edges));
}

Graph path_graph(std::size_t n)
{
    if (n == 0)
        throw InvalidArgument("path graph needs N >= 1");
    std::vector<Edge> edges;
    for (NodeId v = 1; v < n; ++v)
        edges.emplace_back(v - 1, v);
    return Graph(n, std::move(edges));
}

Graph er_graph(std::size_t n, double p, std::uint64_t seed)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw InvalidArgument("ER link probability must lie in [0, 1]");
    if (n == 0)
        throw InvalidArgument("ER graph needs N >= 1");
    Rng rng(seed);
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            if (rng.bernoulli(p))
                edges.emplace_back(u, v);
    return Graph(n, std::move(edges));
}

namespace detail {

DegreeSampler::DegreeSampler(double exponent, std::size_t k_max)
{
    if (k_max < 1)
        throw InvalidArgument("degree support must contain k = 1");
    cdf_.resize(k_max);
    double acc = 0.0;
    for (std::size_t k = 1; k <= k_max; ++k) {
        acc += std::pow(static_cast<double>(k), -exponent);
        cdf_[k - 1] = acc;
    }
    for (auto& c : cdf_)
        c /= acc;
    cdf_.back() = 1.0;
}

std::size_t DegreeSampler::operator()(Rng& rng) const
{
    const double u = rng.uniform();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return static_cast<std::size_t>(it - cdf_.begin()) + 1;
}

double DegreeSampler::probability(std::size_t k) const
{
    if (k < 1 || k > cdf_.size())
        return 0.0;
    return k == 1 ? cdf_[0] : cdf_[k - 1] - cdf_[k - 2];
}

long repair_parity(std::vector<std::size_t>& degrees, const DegreeSampler& sampler, Rng& rng)
{
    const std::size_t sum = std::accumulate(degrees.begin(), degrees.end(), std::size_t{0});
    if (sum % 2 == 0)
        return -1;
    if (degrees.empty() || sampler.probability(2) == 0.0)
        throw InvalidArgument("cannot repair odd degree sum with support [1, 1]");
    const auto i = static_cast<std::size_t>(rng.index(degrees.size()));
    const std::size_t old = degrees[i];
    do {
        degrees[i] = sampler(rng);
    } while ((degrees[i] - old) % 2 == 0);
    return static_cast<long>(i);
}

namespace {

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng)
{
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[rng.index(i)]);
}

} // namespace

std::vector<Edge> pair_stubs(const std::vector<std::size_t>& degrees, Rng& rng)
{
    std::vector<NodeId> stubs;
    for (NodeId u = 0; u < degrees.size(); ++u)
        stubs.insert(stubs.end(), degrees[u], u);

    std::set<Edge> placed;
    constexpr int max_stalled_rounds = 100;
    int stalled = 0;
    while (stubs.size() >= 2 && stalled < max_stalled_rounds) {
        shuffle(stubs, rng);
        std::vector<NodeId> rejected;
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            NodeId u = stubs[i], v = stubs[i + 1];
            if (u > v)
                std::swap(u, v);
            if (u == v || !placed.emplace(u, v).second) {
                rejected.push_back(stubs[i]);
                rejected.push_back(stubs[i + 1]);
            }
        }
        if (stubs.size() % 2 == 1)
            rejected.push_back(stubs.back());
        stalled = rejected.size() == stubs.size() ? stalled + 1 : 0;
        stubs = std::move(rejected);
    }
    return {placed.begin(), placed.end()};
}

} // namespace detail

Graph powerlaw_graph(std::size_t n, double exponent, std::uint64_t seed)
{
    if (!(exponent > 2.0))
        throw InvalidArgument("power-law exponent must exceed 2");
    if (n < 10)
        throw InvalidArgument("power-law graph needs N >= 10");
    const auto k_max = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
    const detail::DegreeSampler sampler(exponent, k_max);
    Rng rng(seed);
    std::vector<std::size_t> degrees(n);
    for (auto& k : degrees)
        k = sampler(rng);
    detail::repair_parity(degrees, sampler, rng);
    return Graph(n, detail::pair_stubs(degrees, rng));
}

SpectralRadius spectral_radius(const Graph& g, double tol, std::size_t max_iterations)
{
    if (!(tol > 0.0))
        throw InvalidArgument("spectral radius tolerance must be positive");
    const std::size_t n = g.node_count();
    if (g.edge_count() == 0)
        return {0.0, 0.0, 0};

    std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> ax(n);
    double value = 0.0, residual = 0.0;
    for (std::size_t it = 1; it <= max_iterations; ++it) {
        for (NodeId u = 0; u < n; ++u) {
            double s = 0.0;
            for (NodeId v : g.neighbors(u))
                s += x[v];
            ax[u] = s;
        }
        // x is unit-norm here.
        value = std::inner_product(x.begin(), x.end(), ax.begin(), 0.0);
        double r2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = ax[i] - value * x[i];
            r2 += r * r;
        }
        residual = std::sqrt(r2);
        if (residual <= tol)
            return {value, residual, it};

        // Shifted step x <- (A + I) x, normalized.
        double norm2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            ax[i] += x[i];
            norm2 += ax[i] * ax[i];
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t i = 0; i < n; ++i)
            x[i] = ax[i] * inv;
    }
    throw SpectralRadiusError("power iteration did not converge within " +
                                  std::to_string(max_iterations) + " iterations (residual " +
                                  std::to_string(residual) + ")",
                              value, residual);
}

Graph parse_edge_list(std::string_view text)
{
    std::size_t line_no = 0;
    std::optional<std::size_t> declared;
    std::vector<Edge> edges;
    std::set<Edge> seen;
    std::size_t max_id = 0;

    auto parse_uint = [&](std::string_view tok, std::size_t& out) {
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
        return ec == std::errc{} && p == tok.data() + tok.size();
    };

    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);

        const auto first = line.find_first_not_of(" \t");
        if (first == std::string_view::npos)
            continue;
        line.remove_prefix(first);

        if (line.front() == '#') {
            const auto eq = line.find("N=");
            if (eq != std::string_view::npos && !declared && edges.empty()) {
                auto tok = line.substr(eq + 2);
                tok = tok.substr(0, tok.find_first_of(" \t"));
                std::size_t value = 0;
                if (!parse_uint(tok, value))
                    throw ParseError(line_no, "malformed node count in header");
                if (value == 0)
                    throw ParseError(line_no, "declared node count must be positive");
                declared = value;
            }
            continue;
        }

        std::istringstream in{std::string(line)};
        std::string a, b, extra;
        in >> a >> b;
        std::size_t u = 0, v = 0;
        if (a.empty() || b.empty() || (in >> extra) || !parse_uint(a, u) || !parse_uint(b, v))
            throw ParseError(line_no, "expected two node ids 'u v'");
        if (declared && (u >= *declared || v >= *declared))
            throw ParseError(line_no, "node id out of range [0, " + std::to_string(*declared) + ")");
        if (!declared && std::max(u, v) >= std::numeric_limits<NodeId>::max())
            throw ParseError(line_no, "node id too large");
        if (u == v)
            throw ParseError(line_no, "self-loop at node " + std::to_string(u));
        Edge e{static_cast<NodeId>(std::min(u, v)), static_cast<NodeId>(std::max(u, v))};
        if (!seen.insert(e).second)
            throw ParseError(line_no, "duplicate edge");
        max_id = std::max(max_id, std::max(u, v));
        edges.push_back(e);
    }
    if (!declared) {
        // Without a header the node count is the largest id plus one.
        if (edges.empty())
            throw ParseError(line_no, "empty edge list without a '# N=<int>' header");
        declared = max_id + 1;
    }
    return Graph(*declared, std::move(edges));
}

std::string format_edge_list(const Graph& g)
{
    std::ostringstream out;
    out << "# N=" << g.node_count() << '\n';
    for (const auto& [u, v] : g.edges())
        out << u << ' ' << v << '\n';
    return out.str();
}

Graph load_edge_list(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InvalidArgument("cannot open edge list " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_edge_list(buf.str());
}

void save_edge_list(const Graph& g, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InvalidArgument("cannot write edge list " + path.string());
    out << format_edge_list(g);
}

} // namespace episis
