#include "episis/birth_death.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "episis/csv.hpp"
#include "episis/rk4.hpp"

namespace episis {

BirthDeathGenerator::BirthDeathGenerator(std::size_t n, const EpidemicParams& params)
{
    if (n == 0)
        throw InvalidArgument("birth-death chain needs N >= 1");
    params.validate();
    birth_.resize(n + 1);
    death_.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const auto fi = static_cast<double>(i);
        birth_[i] = params.beta * fi * static_cast<double>(n - i);
        death_[i] = params.delta * fi;
    }
}

double BirthDeathGenerator::max_exit_rate() const noexcept
{
    double m = 0.0;
    for (std::size_t i = 0; i < birth_.size(); ++i)
        m = std::max(m, birth_[i] + death_[i]);
    return m;
}

double BirthDeathGenerator::entry(std::size_t i, std::size_t j) const
{
    if (i >= size() || j >= size())
        throw InvalidArgument("generator index out of range");
    if (j == i + 1)
        return birth_[i];
    if (j + 1 == i)
        return death_[i];
    if (i == j)
        return -exit_rate(i);
    return 0.0;
}

void BirthDeathGenerator::apply(std::span<const double> y, std::span<double> dy) const
{
    const std::size_t last = size() - 1;
    for (std::size_t i = 0; i <= last; ++i) {
        double v = -(birth_[i] + death_[i]) * y[i];
        if (i > 0)
            v += birth_[i - 1] * y[i - 1];
        if (i < last)
            v += death_[i + 1] * y[i + 1];
        dy[i] = v;
    }
}

namespace detail {

// Shared by the chain and full-state solvers: clamps roundoff negatives,
// checks conservation, renormalizes. `what` names the solver in messages.
void condition_distribution(std::vector<double>& p, double t, double step, const char* what)
{
    for (auto& v : p) {
        if (v < 0.0) {
            if (v > -1e-12)
                v = 0.0;
            else
                throw NumericError(std::string(what) + ": probability " + std::to_string(v) +
                                   " at t = " + std::to_string(t) +
                                   "; reduce the integration step (h = " + std::to_string(step) +
                                   ")");
        }
    }
    const double sum = std::accumulate(p.begin(), p.end(), 0.0);
    if (!(std::abs(sum - 1.0) <= 1e-8))
        throw NumericError(std::string(what) + ": probability mass " + std::to_string(sum) +
                           " at t = " + std::to_string(t) +
                           " breaks conservation; reduce the integration step (h = " +
                           std::to_string(step) + ")");
    for (auto& v : p)
        v /= sum;
}

double effective_step(const Rk4Options& options, double spectral_bound)
{
    if (!(options.step > 0.0))
        throw InvalidArgument("integration step must be positive");
    double h = options.step;
    if (options.limit_to_stability && spectral_bound > 0.0)
        h = std::min(h, 2.5 / spectral_bound);
    return h;
}

} // namespace detail

ChainSolution solve_transient(const BirthDeathGenerator& gen, std::size_t n_init,
                              std::span<const double> times, const Rk4Options& options)
{
    detail::check_time_grid(times);
    if (n_init >= gen.size())
        throw InvalidArgument("initial infected count exceeds N");

    ChainSolution sol;
    sol.times.assign(times.begin(), times.end());
    sol.states.resize(times.size());
    // Gershgorin: every eigenvalue of Q lies within 2·max exit rate of 0.
    sol.step = detail::effective_step(options, 2.0 * gen.max_exit_rate());

    std::vector<double> s0(gen.size(), 0.0);
    s0[n_init] = 1.0;
    detail::integrate_rk4(
        std::move(s0), times, sol.step,
        [&](const std::vector<double>& y, std::vector<double>& dy) { gen.apply(y, dy); },
        [&](std::size_t k, std::vector<double>& y) {
            detail::condition_distribution(y, times[k], sol.step, "birth-death solve");
            sol.states[k] = y;
        });
    return sol;
}

std::vector<double> prevalence_trace(const ChainSolution& sol)
{
    const auto n = static_cast<double>(sol.population());
    std::vector<double> y;
    y.reserve(sol.states.size());
    for (const auto& s : sol.states) {
        double acc = 0.0;
        for (std::size_t i = 1; i < s.size(); ++i)
            acc += static_cast<double>(i) * s[i];
        y.push_back(acc / n);
    }
    return y;
}

std::vector<double> dieout_trace(const ChainSolution& sol)
{
    std::vector<double> d;
    d.reserve(sol.states.size());
    for (const auto& s : sol.states)
        d.push_back(s.front());
    return d;
}

void write_chain_csv(std::ostream& out, const ChainSolution& sol)
{
    out << "t";
    for (std::size_t i = 0; i <= sol.population(); ++i)
        out << ",s_" << i;
    out << '\n';
    for (std::size_t k = 0; k < sol.times.size(); ++k) {
        out << csv::num(sol.times[k]);
        for (double v : sol.states[k])
            out << ',' << csv::num(v);
        out << '\n';
    }
}

std::vector<double> make_grid(double start, double step, double stop)
{
    if (!(step > 0.0))
        throw InvalidArgument("grid step must be positive");
    if (!(stop >= start))
        throw InvalidArgument("grid stop must not precede start");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
    std::vector<double> g;
    g.reserve(count + 1);
    for (std::size_t k = 0; k <= count; ++k)
        g.push_back(start + static_cast<double>(k) * step);
    return g;
}

} // namespace episis
