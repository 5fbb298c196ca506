#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "app.hpp"
#include "config.hpp"
#include "inflation/errors.hpp"

using namespace inflation;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    args.insert(args.begin(), "inflation");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s)
{
    std::vector<std::string> v;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
}

std::string temp_path(const char* name) { return std::string("cli_test_") + name; }

} // namespace

TEST_CASE("grid parsing")
{
    const auto g = cli::GridSpec::parse("1:100:3:log", "m");
    REQUIRE(g.values.size() == 3);
    CHECK(g.values[1] == doctest::Approx(10.0));
    CHECK(cli::GridSpec::parse("0.5,2", "T").values == std::vector<double>{0.5, 2.0});
    CHECK_THROWS_AS(cli::GridSpec::parse("1:2", "m"), InvalidArgument);
    CHECK_THROWS_AS(cli::GridSpec::parse("0:1:3:log", "m"), InvalidArgument);
}

TEST_CASE("single-point delta surface")
{
    const auto r = run({"delta-surface", "--epsilon", "0.5", "--m", "0.2", "--T", "3"});
    CHECK(r.code == 0);
    const auto l = lines(r.out);
    REQUIRE(l.size() == 2);
    CHECK(l[0] == "m,T,delta_closed,delta_spectral,delta_quadrature,max_discrepancy");
}

TEST_CASE("delta surface edges")
{
    const auto r = run({"delta-surface", "--epsilon", "0.5", "--grid", "m=0,1", "--grid", "T=1e-4,5"});
    REQUIRE(r.code == 0);
    const auto l = lines(r.out);
    REQUIRE(l.size() == 5);
    for (std::size_t i = 1; i < l.size(); ++i) {
        double m, T, d;
        char c;
        std::istringstream row(l[i]);
        row >> m >> c >> T >> c >> d;
        if (m == 0.0) CHECK(d == -1.0);
        if (T < 1e-3) CHECK(d == doctest::Approx(-1.0).epsilon(1e-3));
    }
}

TEST_CASE("check mode reports without writing data")
{
    const std::string path = temp_path("check.csv");
    std::remove(path.c_str());
    const auto r = run({"orbit", "--grid", "m=0.1,1", "--grid", "T=1,5", "--check", "--out", path});
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS") != std::string::npos);
    CHECK_FALSE(std::ifstream(path).good());
}

TEST_CASE("threshold flags rows without a root")
{
    const auto r = run({"threshold", "--epsilon", "0.5", "--grid", "T=1,20"});
    REQUIRE(r.code == 0);
    const auto l = lines(r.out);
    REQUIRE(l.size() == 3);
    CHECK(l[1].find("no_root") != std::string::npos);
    CHECK(l[2].find(",ok") != std::string::npos);
}

TEST_CASE("config files and flag precedence")
{
    const std::string path = temp_path("config.json");
    {
        std::ofstream f(path);
        f << R"({"command": "delta-surface", "params": {"epsilon": 0.1, "m": 0.3, "T": 2},
                 "grid": {"T": {"min": 1, "max": 2, "n": 2}}})";
    }
    const auto a = run({"--config", path});
    CHECK(a.code == 0);
    CHECK(lines(a.out).size() == 3);
    const auto b = run({"--config", path, "--grid", "T=4"});
    CHECK(lines(b.out).size() == 2);
    CHECK(lines(b.out)[1].rfind("0.29999999999999999,4,", 0) == 0);
    std::remove(path.c_str());
}

TEST_CASE("strict config")
{
    const std::string path = temp_path("bad.json");
    {
        std::ofstream f(path);
        f << R"({"command": "delta-surface", "params": {"epsilon": 0.1, "mm": 0.3}})";
    }
    const auto r = run({"--config", path});
    CHECK(r.code == 2);
    CHECK(r.err.find("mm") != std::string::npos);
    std::remove(path.c_str());
    CHECK(run({"delta-surface", "--option", "nodez=3"}).code == 2);
    CHECK(run({"delta-surface", "--epsilon", "3"}).code == 2);
    CHECK(run({}).code == 2);
}

TEST_CASE("pdmp output is reproducible and carries the seed")
{
    const std::vector<std::string> args{"pdmp", "--epsilon", "0.5", "--m", "0.2", "--rate", "0.4",
                                        "--horizon", "20000", "--seed", "7", "--option", "replicas=2"};
    const auto a = run(args);
    auto with_jobs = args;
    with_jobs.insert(with_jobs.end(), {"--jobs", "2"});
    const auto b = run(with_jobs);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("\"seed\":7") != std::string::npos);
    CHECK(lines(a.out).size() == 2);
}

TEST_CASE("sir smoke")
{
    const auto r = run({"sir", "--m", "0.05"});
    REQUIRE(r.code == 0);
    const auto l = lines(r.out);
    CHECK(l.front() == "t,S1,I1,S2,I2,C1,C2,R1,R2,cases");
    const double cases = std::stod(l.back().substr(l.back().rfind(',') + 1));
    CHECK(std::isfinite(cases));
    CHECK(cases > 0.0);
    const auto s = run({"sir", "--grid", "m=0,0.05"});
    CHECK(lines(s.out).size() == 3);
}

TEST_CASE("density, sape and persistence")
{
    CHECK(run({"density", "--m", "0.2", "--T", "2.5", "--check"}).code == 0);
    const auto d = run({"density", "--m", "0.2", "--T", "2.5", "--option", "points=11"});
    CHECK(lines(d.out).size() == 12);
    const auto s = run({"sape", "--epsilon", "0.5", "--m", "0.2", "--T", "4", "--grid", "eta=0,0.1",
                        "--horizon", "2000"});
    CHECK(lines(s.out).size() == 2);
    const auto p = run({"persistence", "--epsilon", "0.1", "--alpha", "0.1", "--T", "5", "--grid", "m=0.001,0.1",
                        "--option", "periods=200"});
    REQUIRE(p.code == 0);
    CHECK(lines(p.out)[1].find("Extinct") != std::string::npos);
    CHECK(lines(p.out)[2].find("Persistent") != std::string::npos);
}

TEST_CASE("numerical failures exit with 3")
{
    // A failed --check is reported as a numerical failure.
    CHECK(run({"delta-surface", "--epsilon", "0.5", "--m", "1", "--T", "2", "--check", "--option",
               "tolerance=-1"})
              .code == 3);
}
