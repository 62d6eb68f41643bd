#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "episis/graph.hpp"

namespace episis {

/// Which graph(s) an experiment runs on. `sizes` and `probabilities` may
/// hold several values; each combination is a separate graph instance.
struct GraphSpec {
    enum class Family { complete, er, powerlaw, edgelist };

    Family family = Family::complete;
    std::vector<std::size_t> sizes;
    std::vector<double> probabilities; ///< ER only
    double exponent = 2.6;             ///< power-law only
    std::uint64_t seed = 1;
    std::string path;                  ///< edge-list only

    /// Parses the compact CLI form: `complete:N`, `er:N:p[:seed]`,
    /// `powerlaw:N:exponent[:seed]`, `file:PATH` (or a bare path).
    static GraphSpec parse(std::string_view text);

    friend bool operator==(const GraphSpec&, const GraphSpec&) = default;
};

std::string_view family_name(GraphSpec::Family f);

struct GraphInstance {
    std::string label; ///< subdirectory name when a spec expands to several graphs
    Graph graph;
};

std::vector<GraphInstance> build_graphs(const GraphSpec& spec);

enum class Method { chain, ruin, formula, mc, nimfa, full_state };

std::string_view method_name(Method m);
Method parse_method(std::string_view name);

/// `start:step:stop`, inclusive of stop when it lies on the lattice.
struct GridSpec {
    double start = 0.0;
    double step = 1.0;
    double stop = 45.0;

    static GridSpec parse(std::string_view text);
    std::string to_string() const;
    std::vector<double> values() const;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct ExperimentConfig {
    std::string name = "experiment";
    std::vector<Method> methods;
    std::string out; ///< output directory; empty means `<name>`

    GraphSpec graph;

    /// Exactly one of these is non-empty: normalized rates x = τ·λ1 or raw τ.
    std::vector<double> x_values;
    std::vector<double> tau_values;
    double delta = 1.0;
    std::vector<std::size_t> n_values;
    bool random_init = false;

    GridSpec grid;
    double sample_time = 45.0;
    double step = 0.01; ///< RK4 step for chain, full-state and NIMFA

    std::size_t realizations = 10000;
    std::uint64_t mc_seed = 1;
    int threads = 0;

    bool per_node = false; ///< NIMFA per-node columns

    bool uses(Method m) const;
    /// Throws InvalidArgument naming the violated invariant.
    void validate() const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses the sectioned key = value format. Unknown sections or keys, bad
/// values and missing required keys raise ParseError with the line number.
ExperimentConfig parse_config(std::string_view text);

/// Canonical text form; parse_config(emit_config(c)) == c.
std::string emit_config(const ExperimentConfig& config);

ExperimentConfig load_config(const std::string& path);

} // namespace episis
