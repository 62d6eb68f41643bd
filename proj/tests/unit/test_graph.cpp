#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numeric>

#include "episis/graph.hpp"
#include "oracles.hpp"

using namespace episis;

namespace {

std::size_t degree_sum(const Graph& g)
{
    std::size_t s = 0;
    for (NodeId u = 0; u < g.node_count(); ++u)
        s += g.degree(u);
    return s;
}

bool is_simple(const Graph& g)
{
    for (NodeId u = 0; u < g.node_count(); ++u) {
        auto nb = g.neighbors(u);
        std::vector<NodeId> v(nb.begin(), nb.end());
        std::sort(v.begin(), v.end());
        if (std::adjacent_find(v.begin(), v.end()) != v.end())
            return false;
        if (std::find(v.begin(), v.end(), u) != v.end())
            return false;
    }
    return true;
}

}

TEST_CASE("complete graph sizes")
{
    CHECK(complete_graph(3).edge_count() == 3);
    CHECK(complete_graph(1).edge_count() == 0);
    CHECK(complete_graph(1).node_count() == 1);
    CHECK(complete_graph(126).edge_count() == 7875);
    CHECK_THROWS_AS(complete_graph(0), InvalidArgument);
}

TEST_CASE("graph constructor validation")
{
    CHECK_THROWS_AS(Graph(3, {{0, 0}}), InvalidArgument);
    CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), InvalidArgument);
    CHECK_THROWS_AS(Graph(3, {{0, 3}}), InvalidArgument);
    CHECK_THROWS_AS(Graph(0, {}), InvalidArgument);
    const Graph g(3, {{2, 1}, {0, 1}});
    CHECK(g == path_graph(3));
    CHECK(g.has_edge(1, 2));
    CHECK(g.has_edge(2, 1));
    CHECK_FALSE(g.has_edge(0, 2));
}

TEST_CASE("erdos-renyi generator")
{
    CHECK(er_graph(100, 1.0, 7) == complete_graph(100));
    CHECK(er_graph(100, 0.0, 7).edge_count() == 0);
    const auto g = er_graph(100, 0.5, 1);
    const double sigma = std::sqrt(4950 * 0.25);
    CHECK(std::abs(double(g.edge_count()) - 2475.0) <= 4 * sigma);
    CHECK(er_graph(100, 0.5, 1) == g);
    CHECK_FALSE(er_graph(100, 0.5, 2) == g);
    CHECK_THROWS_AS(er_graph(10, 1.5, 1), InvalidArgument);
    CHECK_THROWS_AS(er_graph(10, -0.1, 1), InvalidArgument);
}

TEST_CASE("handshake and simplicity across generators")
{
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        for (const Graph& g : {er_graph(60, 0.1, seed), powerlaw_graph(500, 2.6, seed),
                               powerlaw_graph(100, 2.2, seed)}) {
            CHECK(degree_sum(g) == 2 * g.edge_count());
            CHECK(is_simple(g));
        }
    }
    for (const Graph& g : {complete_graph(17), star_graph(9), path_graph(11)})
        CHECK(degree_sum(g) == 2 * g.edge_count());
}

TEST_CASE("power-law generator: determinism and tail slope")
{
    const auto g = powerlaw_graph(1000, 2.6, 1);
    CHECK(powerlaw_graph(1000, 2.6, 1) == g);
    CHECK(g.max_degree() <= 31);

    std::vector<double> hist(g.max_degree() + 1, 0.0);
    for (NodeId u = 0; u < g.node_count(); ++u)
        hist[g.degree(u)] += 1.0;
    // least squares of log Pr[k] on log k over k in [2, 20], skipping empty bins
    double sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
    for (std::size_t k = 2; k <= 20 && k < hist.size(); ++k) {
        if (hist[k] == 0.0)
            continue;
        const double x = std::log(double(k)), y = std::log(hist[k] / 1000.0);
        sx += x, sy += y, sxx += x * x, sxy += x * y, m += 1;
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    MESSAGE("tail slope = " << slope);
    CHECK(std::abs(slope + 2.6) <= 0.3);

    CHECK_THROWS_AS(powerlaw_graph(1000, 2.0, 1), InvalidArgument);
    CHECK_THROWS_AS(powerlaw_graph(5, 2.6, 1), InvalidArgument);
}

TEST_CASE("power-law with steep exponent is almost all leaves")
{
    const detail::DegreeSampler sampler(10.0, 10);
    CHECK(sampler.probability(1) == doctest::Approx(0.9990064131381616).epsilon(1e-12));
    const auto g = powerlaw_graph(100, 10.0, 3);
    std::size_t ones = 0;
    for (NodeId u = 0; u < g.node_count(); ++u)
        ones += g.degree(u) == 1;
    // stubs that cannot be paired are dropped, so allow a couple of isolates
    CHECK(ones >= 95);
}

TEST_CASE("parity repair resamples exactly one stub")
{
    const detail::DegreeSampler sampler(2.6, 2);
    Rng rng(11);
    std::vector<std::size_t> degrees(5, 1);
    const long idx = detail::repair_parity(degrees, sampler, rng);
    REQUIRE(idx >= 0);
    CHECK(std::accumulate(degrees.begin(), degrees.end(), std::size_t{0}) % 2 == 0);
    for (std::size_t i = 0; i < degrees.size(); ++i)
        if (long(i) != idx)
            CHECK(degrees[i] == 1);
    const auto edges = detail::pair_stubs(degrees, rng);
    const Graph g(5, edges);
    CHECK(is_simple(g));

    std::vector<std::size_t> even{1, 1, 2};
    CHECK(detail::repair_parity(even, sampler, rng) == -1);
}

TEST_CASE("spectral radius on known spectra")
{
    for (std::size_t n = 2; n <= 200; n += (n < 20 ? 1 : 17)) {
        const auto r = spectral_radius(complete_graph(n), 1e-10);
        CHECK(r.value == doctest::Approx(double(n - 1)).epsilon(1e-10));
    }
    for (std::size_t m : {1u, 4u, 9u, 50u}) {
        const auto r = spectral_radius(star_graph(m), 1e-10);
        CHECK(std::abs(r.value - std::sqrt(double(m))) <= 1e-9);
    }
    CHECK(spectral_radius(Graph(4, {})).value == 0.0);
}

TEST_CASE("spectral radius matches the dense eigensolver")
{
    const double tol = 1e-10;
    std::vector<Graph> graphs{er_graph(100, 0.5, 1), er_graph(200, 0.05, 4), er_graph(150, 0.02, 9),
                              powerlaw_graph(200, 2.6, 5), path_graph(30), star_graph(20)};
    for (const auto& g : graphs) {
        const double dense = oracle::dense_spectral_radius(g.node_count(), g.edges());
        const auto r = spectral_radius(g, tol);
        CHECK(std::abs(r.value - dense) <= 10 * tol * std::max(1.0, dense));
    }
}

TEST_CASE("spectral radius failure carries the last iterate")
{
    const auto g = er_graph(100, 0.5, 1);
    try {
        spectral_radius(g, 1e-14, 3);
        FAIL("expected SpectralRadiusError");
    } catch (const SpectralRadiusError& e) {
        CHECK(e.last_value() > 0.0);
        CHECK(e.last_residual() > 1e-14);
    }
    CHECK_THROWS_AS(spectral_radius(g, 0.0), InvalidArgument);
}

TEST_CASE("edge list parsing")
{
    CHECK(parse_edge_list("# N=3\n0 1\n1 2") == path_graph(3));
    CHECK_THROWS_AS(parse_edge_list("# N=0\n"), ParseError);
    CHECK(parse_edge_list("0 1\n1 2") == path_graph(3));
    CHECK(parse_edge_list("# a comment\n0 1\n") == complete_graph(2));
    CHECK(parse_edge_list("# N=4\n0 1\n").node_count() == 4);
    CHECK_THROWS_AS(parse_edge_list(""), ParseError);

    auto line_of = [](const char* text) {
        try {
            parse_edge_list(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return std::size_t{0};
    };
    CHECK(line_of("# N=3\n0 1\n1 x\n") == 3);
    CHECK(line_of("# N=3\n0 1\n2 2\n") == 3);
    CHECK(line_of("# N=3\n0 3\n") == 2);
    CHECK(line_of("# N=3\n0 1\n\n1 0\n") == 4);
}

TEST_CASE("edge list round trip")
{
    const auto dir = std::filesystem::temp_directory_path() / "episis_graph_test";
    std::filesystem::create_directories(dir);
    for (const Graph& g : {complete_graph(3), er_graph(40, 0.2, 3), Graph(5, {})}) {
        save_edge_list(g, dir / "g.txt");
        CHECK(load_edge_list(dir / "g.txt") == g);
        CHECK(parse_edge_list(format_edge_list(g)) == g);
    }
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(load_edge_list(dir / "missing.txt"), InvalidArgument);
}
