#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "episis/epidemic.hpp"
#include "episis/errors.hpp"

namespace episis::detail {

/// Fixed-step classical RK4 over an output grid.
///
/// `rhs(y, dy)` writes dy/dt for state y. `emit(k, y)` is called at every
/// grid time; the first grid time is the initial state. Between grid points
/// full steps of `h` are taken and the last substep is clipped so the
/// integrator lands exactly on each grid time.
template <typename Rhs, typename Emit>
void integrate_rk4(std::vector<double> y, std::span<const double> times, double h, Rhs&& rhs,
                   Emit&& emit)
{
    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);

    auto step = [&](double dt) {
        rhs(y, k1);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + 0.5 * dt * k1[i];
        rhs(tmp, k2);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + 0.5 * dt * k2[i];
        rhs(tmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + dt * k3[i];
        rhs(tmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    };

    emit(std::size_t{0}, y);
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double span = times[k] - times[k - 1];
        const auto full = static_cast<std::size_t>(std::floor(span / h * (1.0 + 1e-12)));
        for (std::size_t s = 0; s < full; ++s)
            step(h);
        const double rest = span - static_cast<double>(full) * h;
        if (rest > 1e-14 * std::max(1.0, std::abs(times[k])))
            step(rest);
        emit(k, y);
    }
}

/// Validates an output grid: nonempty, starts at 0, strictly increasing.
inline void check_time_grid(std::span<const double> times)
{
    if (times.empty())
        throw InvalidArgument("time grid is empty");
    if (times.front() != 0.0)
        throw InvalidArgument("time grid must start at t = 0");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1]))
            throw InvalidArgument("time grid must be strictly increasing");
}

/// Clamps roundoff negatives (> -1e-12) to zero, checks |sum - 1| <= 1e-8 and
/// renormalizes. Throws NumericError naming `what` otherwise.
void condition_distribution(std::vector<double>& p, double t, double step, const char* what);

/// The requested step, capped at 2.5 / spectral_bound when enabled.
double effective_step(const Rk4Options& options, double spectral_bound);

} // namespace episis::detail
