#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "episis/epidemic.hpp"

namespace episis {

/// Tridiagonal generator of SIS on K_N lumped to the number of infected
/// nodes: i -> i+1 at β·i·(N−i), i -> i−1 at δ·i. State 0 is absorbing.
class BirthDeathGenerator {
public:
    BirthDeathGenerator(std::size_t n, const EpidemicParams& params);

    /// N; the chain has N + 1 states.
    std::size_t population() const noexcept { return birth_.size() - 1; }
    std::size_t size() const noexcept { return birth_.size(); }

    double birth_rate(std::size_t i) const { return birth_.at(i); }
    double death_rate(std::size_t i) const { return death_.at(i); }
    double exit_rate(std::size_t i) const { return birth_.at(i) + death_.at(i); }
    double max_exit_rate() const noexcept;

    /// Generator entry Q(i, j).
    double entry(std::size_t i, std::size_t j) const;

    /// dy = y^T Q for a row vector y, in O(N).
    void apply(std::span<const double> y, std::span<double> dy) const;

private:
    std::vector<double> birth_;
    std::vector<double> death_;
};

/// Transient distribution s(t) of the chain on a time grid.
struct ChainSolution {
    std::vector<double> times;
    /// states[k][i] = Pr[S(times[k]) = i/N].
    std::vector<std::vector<double>> states;
    /// Step actually used by the integrator.
    double step = 0.0;

    std::size_t population() const { return states.empty() ? 0 : states.front().size() - 1; }
};

/// Integrates s'(t)^T = s(t)^T Q from the indicator of `n_init`.
///
/// Probability conservation is checked to 1e-8 at every grid time and
/// negative entries above -1e-12 are clamped; anything worse raises
/// NumericError asking for a smaller step.
ChainSolution solve_transient(const BirthDeathGenerator& gen, std::size_t n_init,
                              std::span<const double> times, const Rk4Options& options = {});

/// y(t) = Σ_i (i/N)·s_i(t).
std::vector<double> prevalence_trace(const ChainSolution& sol);

/// s_0(t) = Pr[S(t) = 0].
std::vector<double> dieout_trace(const ChainSolution& sol);

/// CSV with header `t,s_0,...,s_N`, one row per time, full precision.
void write_chain_csv(std::ostream& out, const ChainSolution& sol);

/// Evenly spaced grid start, start+step, ..., stop (inclusive within 1e-9·step).
std::vector<double> make_grid(double start, double step, double stop);

} // namespace episis
