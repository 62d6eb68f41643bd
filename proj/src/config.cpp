#include "episis/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "episis/birth_death.hpp"
#include "episis/csv.hpp"
#include "episis/full_state.hpp"

namespace episis {

namespace {

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find(sep, pos);
        parts.push_back(trim(s.substr(pos, next == std::string_view::npos ? next : next - pos)));
        if (next == std::string_view::npos)
            return parts;
        pos = next + 1;
    }
}

template <typename T>
bool parse_number(std::string_view tok, T& out)
{
    tok = trim(tok);
    if (!tok.empty() && tok.front() == '+')
        tok.remove_prefix(1);
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return !tok.empty() && ec == std::errc{} && p == tok.data() + tok.size();
}

template <typename T>
T number_or_throw(std::string_view tok, std::size_t line, std::string_view key)
{
    T v{};
    if (!parse_number(tok, v))
        throw ParseError(line, "invalid value '" + std::string(tok) + "' for '" + std::string(key) + "'");
    return v;
}

template <typename T>
std::vector<T> list_or_throw(std::string_view tok, std::size_t line, std::string_view key)
{
    std::vector<T> out;
    for (auto part : split(tok, ','))
        out.push_back(number_or_throw<T>(part, line, key));
    return out;
}

bool bool_or_throw(std::string_view tok, std::size_t line, std::string_view key)
{
    if (tok == "true" || tok == "1" || tok == "yes")
        return true;
    if (tok == "false" || tok == "0" || tok == "no")
        return false;
    throw ParseError(line, "invalid boolean '" + std::string(tok) + "' for '" + std::string(key) + "'");
}

std::string fmt(double v) { return csv::num(v); }

template <typename T>
std::string join(const std::vector<T>& values)
{
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i)
            s += ", ";
        if constexpr (std::is_floating_point_v<T>)
            s += fmt(values[i]);
        else
            s += std::to_string(values[i]);
    }
    return s;
}

GraphSpec::Family parse_family(std::string_view name)
{
    if (name == "complete")
        return GraphSpec::Family::complete;
    if (name == "er")
        return GraphSpec::Family::er;
    if (name == "powerlaw")
        return GraphSpec::Family::powerlaw;
    if (name == "edgelist" || name == "file")
        return GraphSpec::Family::edgelist;
    throw InvalidArgument("unknown graph family '" + std::string(name) + "'");
}

bool on_grid(const std::vector<double>& grid, double t)
{
    return std::any_of(grid.begin(), grid.end(), [&](double g) {
        return std::abs(g - t) <= 1e-12 * std::max(1.0, std::abs(t));
    });
}

} // namespace

std::string_view family_name(GraphSpec::Family f)
{
    switch (f) {
    case GraphSpec::Family::complete:
        return "complete";
    case GraphSpec::Family::er:
        return "er";
    case GraphSpec::Family::powerlaw:
        return "powerlaw";
    case GraphSpec::Family::edgelist:
        return "edgelist";
    }
    return "?";
}

GraphSpec GraphSpec::parse(std::string_view text)
{
    const auto colon = text.find(':');
    const std::string_view head = text.substr(0, colon);
    GraphSpec spec;
    if (colon == std::string_view::npos || !(head == "complete" || head == "er" ||
                                             head == "powerlaw" || head == "file" ||
                                             head == "edgelist")) {
        spec.family = Family::edgelist;
        spec.path = std::string(text);
        return spec;
    }
    spec.family = parse_family(head);
    const std::string_view rest = text.substr(colon + 1);
    if (spec.family == Family::edgelist) {
        spec.path = std::string(rest);
        return spec;
    }
    const auto parts = split(rest, ':');
    auto bad = [&]() {
        return InvalidArgument("malformed graph spec '" + std::string(text) + "'");
    };
    std::size_t n = 0;
    if (parts.empty() || !parse_number(parts[0], n))
        throw bad();
    spec.sizes = {n};
    switch (spec.family) {
    case Family::complete:
        if (parts.size() != 1)
            throw bad();
        break;
    case Family::er:
    case Family::powerlaw: {
        if (parts.size() < 2 || parts.size() > 3)
            throw bad();
        double value = 0.0;
        if (!parse_number(parts[1], value))
            throw bad();
        if (spec.family == Family::er)
            spec.probabilities = {value};
        else
            spec.exponent = value;
        if (parts.size() == 3 && !parse_number(parts[2], spec.seed))
            throw bad();
        break;
    }
    case Family::edgelist:
        break;
    }
    return spec;
}

std::vector<GraphInstance> build_graphs(const GraphSpec& spec)
{
    std::vector<GraphInstance> out;
    switch (spec.family) {
    case GraphSpec::Family::complete:
        for (auto n : spec.sizes)
            out.push_back({"N" + std::to_string(n), complete_graph(n)});
        break;
    case GraphSpec::Family::er:
        for (auto n : spec.sizes)
            for (double p : spec.probabilities)
                out.push_back({"N" + std::to_string(n) + "_p" + fmt(p), er_graph(n, p, spec.seed)});
        break;
    case GraphSpec::Family::powerlaw:
        for (auto n : spec.sizes)
            out.push_back({"N" + std::to_string(n), powerlaw_graph(n, spec.exponent, spec.seed)});
        break;
    case GraphSpec::Family::edgelist:
        out.push_back({"edgelist", load_edge_list(spec.path)});
        break;
    }
    return out;
}

std::string_view method_name(Method m)
{
    switch (m) {
    case Method::chain:
        return "chain";
    case Method::ruin:
        return "ruin";
    case Method::formula:
        return "formula";
    case Method::mc:
        return "mc";
    case Method::nimfa:
        return "nimfa";
    case Method::full_state:
        return "full-state";
    }
    return "?";
}

Method parse_method(std::string_view name)
{
    for (Method m : {Method::chain, Method::ruin, Method::formula, Method::mc, Method::nimfa,
                     Method::full_state})
        if (method_name(m) == name)
            return m;
    throw InvalidArgument("unknown method '" + std::string(name) +
                          "' (expected chain|ruin|formula|mc|nimfa|full-state)");
}

GridSpec GridSpec::parse(std::string_view text)
{
    const auto parts = split(text, ':');
    GridSpec g;
    if (parts.size() != 3 || !parse_number(parts[0], g.start) || !parse_number(parts[1], g.step) ||
        !parse_number(parts[2], g.stop))
        throw InvalidArgument("grid must be start:step:stop, got '" + std::string(text) + "'");
    return g;
}

std::string GridSpec::to_string() const { return fmt(start) + ":" + fmt(step) + ":" + fmt(stop); }

std::vector<double> GridSpec::values() const { return make_grid(start, step, stop); }

bool ExperimentConfig::uses(Method m) const
{
    return std::find(methods.begin(), methods.end(), m) != methods.end();
}

void ExperimentConfig::validate() const
{
    auto fail = [](const std::string& what) { throw InvalidArgument("invalid config: " + what); };
    if (methods.empty())
        fail("at least one method is required");
    if (!(delta > 0.0))
        fail("delta must be > 0");
    if (x_values.empty() == tau_values.empty())
        fail("exactly one of 'x' and 'tau' must be given");
    for (double x : x_values)
        if (!(x > 0.0))
            fail("every x must be > 0");
    for (double t : tau_values)
        if (!(t >= 0.0))
            fail("every tau must be >= 0");
    if (n_values.empty())
        fail("at least one initial infected count 'n' is required");

    using F = GraphSpec::Family;
    if (graph.family != F::edgelist && graph.sizes.empty())
        fail("graph size 'N' is required");
    if (graph.family == F::edgelist && graph.path.empty())
        fail("edge-list graph needs 'path'");
    if (graph.family == F::er) {
        if (graph.probabilities.empty())
            fail("ER graph needs 'p'");
        for (double p : graph.probabilities)
            if (!(p >= 0.0 && p <= 1.0))
                fail("ER link probability must lie in [0, 1]");
    }
    if (graph.family == F::powerlaw && !(graph.exponent > 2.0))
        fail("power-law exponent must exceed 2");
    for (auto n : graph.sizes) {
        if (n == 0)
            fail("graph size must be positive");
        for (auto k : n_values)
            if (k > n)
                fail("initial infected count n = " + std::to_string(k) + " exceeds N = " +
                     std::to_string(n));
    }

    if (uses(Method::chain) && graph.family != F::complete)
        fail("method 'chain' is only valid with a complete graph");
    if (uses(Method::full_state))
        for (auto n : graph.sizes)
            if (n > full_state_max_nodes)
                fail("method 'full-state' is only valid with N <= " +
                     std::to_string(full_state_max_nodes));

    if (grid.start != 0.0)
        fail("time grid must start at 0");
    if (!(grid.step > 0.0) || !(grid.stop >= grid.start))
        fail("time grid needs step > 0 and stop >= start");
    if ((uses(Method::chain) || uses(Method::mc) || uses(Method::full_state)) &&
        !on_grid(grid.values(), sample_time))
        fail("sample_time " + fmt(sample_time) + " is not a grid point of " + grid.to_string());
    if (!(step > 0.0))
        fail("integration step must be > 0");
    if (realizations == 0)
        fail("realizations must be >= 1");
    if (threads < 0)
        fail("threads must be >= 0");
}

ExperimentConfig parse_config(std::string_view text)
{
    ExperimentConfig c;
    std::string section;
    std::map<std::string, std::size_t> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError(line_no, "unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            static const std::vector<std::string> known{"experiment", "graph", "epidemic",
                                                        "time", "mc", "nimfa"};
            if (std::find(known.begin(), known.end(), section) == known.end())
                throw ParseError(line_no, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParseError(line_no, "expected 'key = value'");
        if (section.empty())
            throw ParseError(line_no, "key outside of any section");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        const std::string qualified = section + "." + key;
        if (!seen.emplace(qualified, line_no).second)
            throw ParseError(line_no, "duplicate key '" + qualified + "'");

        try {
            if (qualified == "experiment.name")
                c.name = std::string(value);
            else if (qualified == "experiment.methods") {
                c.methods.clear();
                for (auto m : split(value, ','))
                    c.methods.push_back(parse_method(m));
            } else if (qualified == "experiment.out")
                c.out = std::string(value);
            else if (qualified == "graph.family")
                c.graph.family = parse_family(value);
            else if (qualified == "graph.N")
                c.graph.sizes = list_or_throw<std::size_t>(value, line_no, key);
            else if (qualified == "graph.p")
                c.graph.probabilities = list_or_throw<double>(value, line_no, key);
            else if (qualified == "graph.exponent")
                c.graph.exponent = number_or_throw<double>(value, line_no, key);
            else if (qualified == "graph.seed")
                c.graph.seed = number_or_throw<std::uint64_t>(value, line_no, key);
            else if (qualified == "graph.path")
                c.graph.path = std::string(value);
            else if (qualified == "epidemic.x")
                c.x_values = list_or_throw<double>(value, line_no, key);
            else if (qualified == "epidemic.tau")
                c.tau_values = list_or_throw<double>(value, line_no, key);
            else if (qualified == "epidemic.delta")
                c.delta = number_or_throw<double>(value, line_no, key);
            else if (qualified == "epidemic.n")
                c.n_values = list_or_throw<std::size_t>(value, line_no, key);
            else if (qualified == "epidemic.init") {
                if (value != "fixed" && value != "random")
                    throw ParseError(line_no, "init must be 'fixed' or 'random'");
                c.random_init = value == "random";
            } else if (qualified == "time.grid")
                c.grid = GridSpec::parse(value);
            else if (qualified == "time.sample_time")
                c.sample_time = number_or_throw<double>(value, line_no, key);
            else if (qualified == "time.step")
                c.step = number_or_throw<double>(value, line_no, key);
            else if (qualified == "mc.realizations")
                c.realizations = number_or_throw<std::size_t>(value, line_no, key);
            else if (qualified == "mc.seed")
                c.mc_seed = number_or_throw<std::uint64_t>(value, line_no, key);
            else if (qualified == "mc.threads")
                c.threads = number_or_throw<int>(value, line_no, key);
            else if (qualified == "nimfa.per_node")
                c.per_node = bool_or_throw(value, line_no, key);
            else
                throw ParseError(line_no, "unknown key '" + qualified + "'");
        } catch (const ParseError&) {
            throw;
        } catch (const InvalidArgument& e) {
            throw ParseError(line_no, e.what());
        }
    }
    for (const char* required : {"experiment.methods", "graph.family", "epidemic.n"})
        if (!seen.count(required))
            throw ParseError(line_no, std::string("missing required key '") + required + "'");
    if (!seen.count("epidemic.x") && !seen.count("epidemic.tau"))
        throw ParseError(line_no, "missing required key 'epidemic.x' or 'epidemic.tau'");
    return c;
}

std::string emit_config(const ExperimentConfig& c)
{
    std::ostringstream out;
    out << "[experiment]\n";
    out << "name = " << c.name << '\n';
    out << "methods = ";
    for (std::size_t i = 0; i < c.methods.size(); ++i)
        out << (i ? ", " : "") << method_name(c.methods[i]);
    out << '\n';
    if (!c.out.empty())
        out << "out = " << c.out << '\n';

    out << "\n[graph]\n";
    out << "family = " << family_name(c.graph.family) << '\n';
    if (!c.graph.sizes.empty())
        out << "N = " << join(c.graph.sizes) << '\n';
    if (!c.graph.probabilities.empty())
        out << "p = " << join(c.graph.probabilities) << '\n';
    out << "exponent = " << fmt(c.graph.exponent) << '\n';
    out << "seed = " << c.graph.seed << '\n';
    if (!c.graph.path.empty())
        out << "path = " << c.graph.path << '\n';

    out << "\n[epidemic]\n";
    if (!c.x_values.empty())
        out << "x = " << join(c.x_values) << '\n';
    if (!c.tau_values.empty())
        out << "tau = " << join(c.tau_values) << '\n';
    out << "delta = " << fmt(c.delta) << '\n';
    out << "n = " << join(c.n_values) << '\n';
    out << "init = " << (c.random_init ? "random" : "fixed") << '\n';

    out << "\n[time]\n";
    out << "grid = " << c.grid.to_string() << '\n';
    out << "sample_time = " << fmt(c.sample_time) << '\n';
    out << "step = " << fmt(c.step) << '\n';

    out << "\n[mc]\n";
    out << "realizations = " << c.realizations << '\n';
    out << "seed = " << c.mc_seed << '\n';
    out << "threads = " << c.threads << '\n';

    out << "\n[nimfa]\n";
    out << "per_node = " << (c.per_node ? "true" : "false") << '\n';
    return out.str();
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InvalidArgument("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

} // namespace episis
