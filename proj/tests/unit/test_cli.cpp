#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "episis/cli.hpp"
#include "episis/ruin.hpp"

using namespace episis;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s)
{
    std::vector<std::string> v;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);)
        v.push_back(l);
    return v;
}

}

TEST_CASE("formula and ruin subcommands")
{
    auto r = run({"formula", "--x", "2", "--n", "3"});
    CHECK(r.code == 0);
    CHECK(r.out == "0.125\n");

    r = run({"ruin", "--N", "126", "--tau", "0.016", "--n", "1"});
    CHECK(r.code == 0);
    CHECK(std::stod(r.out) == gamblers_ruin(126, 0.016, 1));

    r = run({"ruin", "--N", "126", "--x", "2", "--n", "1", "--asymptotic"});
    CHECK(r.code == 0);
    CHECK(std::stod(r.out) == doctest::Approx(0.5));

    r = run({"ruin", "--N", "126", "--tau", "0.005", "--n", "1", "--asymptotic"});
    CHECK(r.code == 1);
}

TEST_CASE("chain subcommand")
{
    auto r = run({"chain", "--N", "1", "--tau", "0", "--grid", "0:1:1"});
    REQUIRE(r.code == 0);
    const auto l = lines(r.out);
    REQUIRE(l.size() == 3);
    CHECK(l[0] == "t,s_0,s_1");
    const double s0 = std::stod(l[2].substr(2, l[2].find(',', 2) - 2));
    CHECK(s0 == doctest::Approx(0.632121).epsilon(1e-6));

    r = run({"chain", "--N", "126", "--x", "2", "--n", "3", "--trace", "--grid", "0:45:45"});
    REQUIRE(r.code == 0);
    CHECK(lines(r.out)[0] == "t,s_0,y");
}

TEST_CASE("usage errors")
{
    CHECK(run({"formula", "--x", "2", "--n", "3", "--bogus"}).code == 1);
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"formula", "--x", "two", "--n", "1"}).code == 1);
    CHECK(run({"formula", "--x", "0", "--n", "1"}).code == 1);
    CHECK(run({"chain", "--N", "5", "--tau", "1", "--x", "1"}).code == 1);
    CHECK(run({"chain", "--N", "5", "--tau", "1", "--n", "9"}).code == 1);
    const auto bad = run({"experiment", "/nonexistent/config.cfg"});
    CHECK(bad.code == 1);
    CHECK_FALSE(bad.err.empty());

    auto help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("experiment") != std::string::npos);
    auto version = run({"--version"});
    CHECK(version.code == 0);
    CHECK(version.out.find(cli::version) != std::string::npos);
}

TEST_CASE("exit codes for numeric and capacity failures")
{
    auto r = run({"full-state", "--graph", "complete:14", "--tau", "0.1"});
    CHECK(r.code == 3);
    CHECK(r.err.find("13") != std::string::npos);

    r = run({"chain", "--N", "200", "--tau", "10", "--grid", "0:1:1", "--step", "0.5"});
    CHECK(r.code == 0); // the stability guard shrinks the step

    const auto dir = std::filesystem::temp_directory_path() / "episis_cli_test";
    std::filesystem::create_directories(dir);
    const auto cfg = dir / "cap.cfg";
    std::ofstream(cfg) << "[experiment]\nmethods = mc\nout = " << (dir / "cap").string()
                       << "\n[graph]\nfamily = er\nN = 10\np = 0.5\n[epidemic]\nx = 1\nn = 1\n"
                          "[time]\ngrid = 0:1:3\nsample_time = 3\n";
    CHECK(run({"experiment", cfg.string()}).code == 0);
    std::ofstream(cfg) << "[experiment]\nmethods = chain\n[graph]\nfamily = er\nN = 10\np = 0.5\n"
                          "[epidemic]\nx = 1\nn = 1\n";
    r = run({"experiment", cfg.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("complete graph") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("simulate, nimfa and full-state subcommands")
{
    auto r = run({"simulate", "--graph", "complete:20", "--x", "2", "--realizations", "200",
                  "--grid", "0:1:10", "--sample-time", "10", "--seed", "4"});
    REQUIRE(r.code == 0);
    CHECK(lines(r.out)[0] == "t,R,dieout,dieout_ci,prevalence,cond_prevalence");
    CHECK(lines(r.out).size() == 12);
    CHECK(r.err.find("dieout(t = 10)") != std::string::npos);
    auto again = run({"simulate", "--graph", "complete:20", "--x", "2", "--realizations", "200",
                      "--grid", "0:1:10", "--seed", "4", "--threads", "1"});
    CHECK(again.out == r.out);

    r = run({"nimfa", "--graph", "complete:50", "--tau", "0.06", "--grid", "0:1:3", "--per-node"});
    REQUIRE(r.code == 0);
    CHECK(lines(r.out)[0].rfind("t,y1,f,y_corrected,v_0,", 0) == 0);

    r = run({"full-state", "--graph", "complete:4", "--tau", "0.5", "--grid", "0:1:2"});
    REQUIRE(r.code == 0);
    CHECK(lines(r.out)[0] == "t,dieout,prevalence");
    CHECK(lines(r.out)[1] == "0,0,0.25");

    r = run({"simulate", "--graph", "complete:20", "--x", "2", "--grid", "0:1:10", "--sample-time", "3.5"});
    CHECK(r.code == 1);
}

TEST_CASE("experiment subcommand")
{
    auto r = run({"experiment", "fig1a", "--emit-config"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("tau = 0.016") != std::string::npos);
    CHECK(run({"experiment", "fig9"}).code == 1);

    const auto dir = std::filesystem::temp_directory_path() / "episis_cli_fig1a";
    std::filesystem::remove_all(dir);
    r = run({"experiment", "fig1a", "--out", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(std::filesystem::exists(dir / "chain_trace_x2_n3.csv"));
    std::ifstream summary(dir / "summary.csv");
    std::string header, row;
    std::getline(summary, header);
    std::getline(summary, row);
    CHECK(row.rfind("2,3,0.125,", 0) == 0);
    std::filesystem::remove_all(dir);
}
