#include <doctest.h>

#include <cmath>
#include <sstream>

#include "episis/birth_death.hpp"
#include "episis/full_state.hpp"
#include "episis/kernels.hpp"
#include "episis/nimfa.hpp"
#include "episis/ruin.hpp"

using namespace episis;

TEST_CASE("disease-free equilibrium is fixed")
{
    const auto g = er_graph(30, 0.2, 1);
    const auto sol = solve_nimfa(g, {2.0, 1.0}, std::vector<double>(30, 0.0), make_grid(0.0, 1.0, 10.0));
    for (const auto& v : sol.v)
        for (double x : v)
            CHECK(x == 0.0);
}

TEST_CASE("K_50 converges to 1 - 1/x")
{
    const auto g = complete_graph(50);
    const auto params = EpidemicParams::from_tau(0.06);
    const auto sol = solve_nimfa(g, params, uniform_initial_state(50, 1), make_grid(0.0, 1.0, 20.0));
    const double target = 1.0 - 1.0 / 2.94;
    CHECK(std::abs(sol.y1.back() - target) <= 1e-4);
    CHECK(sol.y1[0] == doctest::Approx(1.0 / 50.0));

    const auto ss = nimfa_steady_state(g, params);
    CHECK(ss.x == doctest::Approx(2.94));
    for (double v : ss.v)
        CHECK(std::abs(v - target) <= 1e-9);
}

TEST_CASE("below threshold the solution decays exponentially")
{
    const auto g = complete_graph(10);
    const double x = 0.5;
    const auto params = EpidemicParams::from_tau(x / 9.0);
    const double t_end = 20.0 / (1.0 - x);
    const auto sol = solve_nimfa(g, params, std::vector<double>(10, 0.9), std::vector<double>{0.0, t_end});
    double norm = 0.0;
    for (double v : sol.v.back())
        norm += v * v;
    CHECK(std::sqrt(norm) < 1e-6);

    const auto ss = nimfa_steady_state(g, params);
    for (double v : ss.v)
        CHECK(v == 0.0);
}

TEST_CASE("steady state on a star graph")
{
    const auto g = star_graph(16); // lambda1 = 4
    const auto params = EpidemicParams::from_tau(2.0 / 4.0);
    const auto ss = nimfa_steady_state(g, params, 1e-10);
    CHECK(ss.residual <= 1e-10);
    std::vector<double> dv(ss.v.size());
    kernels::nimfa_rhs_serial(g, params, ss.v, dv);
    for (double d : dv)
        CHECK(std::abs(d) <= 1e-10);
    CHECK_FALSE(ss.near_threshold);
}

TEST_CASE("steady state does not depend on the initial condition")
{
    const auto g = er_graph(60, 0.1, 4);
    const double lambda1 = spectral_radius(g).value;
    const auto params = EpidemicParams::from_tau(2.0 / lambda1);
    const std::vector<double> grid{0.0, 200.0};
    const auto a = solve_nimfa(g, params, uniform_initial_state(60, 1), grid);
    std::vector<double> v0(60, 0.0);
    v0[7] = 1.0;
    v0[30] = 0.3;
    const auto b = solve_nimfa(g, params, v0, grid);
    const auto ss = nimfa_steady_state(g, params);
    for (std::size_t j = 0; j < 60; ++j) {
        CHECK(std::abs(a.v.back()[j] - b.v.back()[j]) <= 1e-6);
        CHECK(std::abs(a.v.back()[j] - ss.v[j]) <= 1e-6);
    }
}

TEST_CASE("NIMFA upper-bounds the exact prevalence on small complete graphs")
{
    const auto grid = make_grid(0.0, 0.5, 20.0);
    for (std::size_t n : {4u, 7u, 10u}) {
        const auto g = complete_graph(n);
        for (double x : {0.5, 2.0}) {
            const auto params = EpidemicParams::from_tau(x / double(n - 1));
            // one node infected exactly vs v(0) = e_0 in NIMFA
            std::vector<double> v0(n, 0.0);
            v0[0] = 1.0;
            const auto mf = solve_nimfa(g, params, v0, grid);
            const auto exact = full_state_solver(g, params, std::vector<NodeId>{0}, grid);
            for (std::size_t k = 0; k < grid.size(); ++k)
                CHECK(mf.y1[k] >= exact.prevalence[k] - 1e-8);
        }
    }
}

TEST_CASE("interval preservation and step guard")
{
    const auto g = powerlaw_graph(400, 2.3, 2);
    const auto sol = solve_nimfa(g, {5.0, 1.0}, uniform_initial_state(400, 3), make_grid(0.0, 0.5, 10.0));
    for (const auto& v : sol.v)
        for (double x : v)
            CHECK((x >= 0.0 && x <= 1.0));
    CHECK_THROWS_AS(solve_nimfa(g, {5.0, 1.0}, uniform_initial_state(400, 3), std::vector<double>{0.0, 1.0},
                                {{0.5, false}, false}),
                    NumericError);
    CHECK_THROWS_AS(solve_nimfa(g, {1.0, 1.0}, std::vector<double>(3, 0.0), std::vector<double>{0.0, 1.0}),
                    InvalidArgument);
    CHECK_THROWS_AS(solve_nimfa(g, {1.0, 1.0}, std::vector<double>(400, 1.5), std::vector<double>{0.0, 1.0}),
                    InvalidArgument);
}

TEST_CASE("serial and parallel right-hand sides agree")
{
    const auto g = er_graph(500, 0.02, 6);
    std::vector<double> v(500);
    Rng rng(8);
    for (auto& x : v)
        x = rng.uniform();
    std::vector<double> a(500), b(500);
    kernels::nimfa_rhs_serial(g, {0.3, 1.0}, v, a);
    kernels::nimfa_rhs_parallel(g, {0.3, 1.0}, v, b);
    CHECK(a == b);
    const auto grid = make_grid(0.0, 1.0, 5.0);
    const auto s = solve_nimfa(g, {0.3, 1.0}, v, grid, {{}, false});
    const auto p = solve_nimfa(g, {0.3, 1.0}, v, grid, {{}, true});
    CHECK(s.y1 == p.y1);
}

TEST_CASE("corrected prevalence")
{
    const auto g = complete_graph(50);
    const auto params = EpidemicParams::from_tau(0.06);
    const NormalizedRate x(2.94);
    const auto sol = solve_nimfa(g, params, uniform_initial_state(50, 1), make_grid(0.0, 0.5, 40.0));
    const auto yc = corrected_prevalence(sol, x, 1, 49.0);
    CHECK(yc[0] == doctest::Approx(1.0 / 50.0));
    CHECK(yc.back() == doctest::Approx(0.4354204266740711).epsilon(1e-6));

    // at x = 1 the correction is exp(-lambda1 t)
    const auto g10 = complete_graph(10);
    const auto sol1 = solve_nimfa(g10, EpidemicParams::from_tau(1.0 / 9.0), uniform_initial_state(10, 1),
                                  make_grid(0.0, 0.5, 5.0));
    const auto y1c = corrected_prevalence(sol1, NormalizedRate(1.0), 1, 9.0);
    for (std::size_t k = 0; k < y1c.size(); ++k)
        CHECK(y1c[k] == doctest::Approx(sol1.y1[k] * std::exp(-9.0 * sol1.times[k])));

    CHECK_THROWS_AS(corrected_prevalence(sol, NormalizedRate(0.8), 1, 49.0), InvalidArgument);
}

TEST_CASE("NIMFA CSV")
{
    const auto g = complete_graph(4);
    const auto sol = solve_nimfa(g, EpidemicParams::from_tau(1.0), uniform_initial_state(4, 1),
                                 std::vector<double>{0.0, 1.0});
    std::ostringstream a, b, c;
    write_nimfa_csv(a, sol, NormalizedRate(3.0), 1, 3.0, false);
    CHECK(a.str().substr(0, a.str().find('\n')) == "t,y1,f,y_corrected");
    CHECK(a.str().find("\n0,0.25,1,0.25\n") != std::string::npos);
    write_nimfa_csv(b, sol, NormalizedRate(3.0), 1, 3.0, true);
    CHECK(b.str().substr(0, b.str().find('\n')) == "t,y1,f,y_corrected,v_0,v_1,v_2,v_3");
    write_nimfa_csv(c, sol, NormalizedRate(0.5), 1, 3.0, false);
    CHECK(c.str().find("\n0,0.25,,\n") != std::string::npos);
}

TEST_CASE("uniform initial state")
{
    CHECK(uniform_initial_state(50, 2) == std::vector<double>(50, 0.04));
    CHECK_THROWS_AS(uniform_initial_state(5, 6), InvalidArgument);
}
