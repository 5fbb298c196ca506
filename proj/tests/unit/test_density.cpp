#include "doctest.h"

#include <cmath>
#include <sstream>
#include <string>

#include "inflation/analytic.hpp"
#include "inflation/density.hpp"
#include "oracles.hpp"

using namespace inflation;

TEST_CASE("density is normalized across regimes")
{
    for (double T : {1e-3, 0.1, 0.4, 2.5, 10.0, 1e3}) {
        for (double m : {0.01, 0.2, 3.0}) {
            const InvariantDensity rho(m, T);
            CAPTURE(T);
            CAPTURE(m);
            CHECK(rho.mass(-rho.v_plus(), rho.v_plus()) == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(rho(0.4 * rho.v_plus()) == doctest::Approx(rho(-0.4 * rho.v_plus())).epsilon(1e-12));
        }
    }
}

TEST_CASE("density solves the stationary forward equations")
{
    for (double T : {0.3, 2.5}) {
        const double m = 0.2;
        const InvariantDensity rho(m, T);
        auto rp = [&](oracle::Real v) { return static_cast<oracle::Real>(rho.rho_plus(static_cast<double>(v))); };
        auto rm = [&](oracle::Real v) { return static_cast<oracle::Real>(rho.rho_minus(static_cast<double>(v))); };
        for (double f : {-0.9, -0.5, 0.0, 0.3, 0.8}) {
            const auto [a, b] = oracle::fokker_planck_residual(rp, rm, m, 1.0 / T, f * rho.v_plus(), 1e-5);
            CAPTURE(T);
            CAPTURE(f);
            CHECK(std::fabs(a) < 1e-7);
            CHECK(std::fabs(b) < 1e-7);
        }
    }
}

TEST_CASE("boundedness flag")
{
    const double A = std::sqrt(1.0 + 0.04);
    const double tc = 1.0 / (2.0 * A);
    CHECK(InvariantDensity(0.2, tc * 0.999).bounded_at_endpoints());
    CHECK_FALSE(InvariantDensity(0.2, tc * 1.001).bounded_at_endpoints());
    CHECK(InvariantDensity(0.2, 2.5).tail_exponent() < 0.0);
}

TEST_CASE("density quadrature limits")
{
    CHECK(delta_pdmp_quadrature(0.5, 0.2, 1e-3).value == doctest::Approx(-1.0).epsilon(1e-2));
    CHECK(std::abs(delta_pdmp_quadrature(0.5, 0.2, 1e3).value - delta_limit_T_inf(0.5, 0.2)) < 1e-2);
    CHECK(std::abs(delta_pdmp_quadrature(0.5, 1e6, 0.4).value + 1.0) < 1e-2);
}

TEST_CASE("table of a smooth density integrates to one")
{
    const InvariantDensity rho(0.2, 0.1);
    std::ostringstream os;
    rho.write_csv(os, 20001);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "v,rho_plus,rho_minus,rho");
    double trap = 0.0, pv = 0.0, pr = 0.0, v0 = 0.0;
    bool first = true;
    while (std::getline(in, line)) {
        double v, a, b, r;
        char c;
        std::istringstream row(line);
        row >> v >> c >> a >> c >> b >> c >> r;
        if (first) v0 = v;
        else trap += 0.5 * (r + pr) * (v - pv);
        pv = v;
        pr = r;
        first = false;
    }
    CHECK(std::abs(trap + (1.0 - rho.mass(v0, pv)) - 1.0) < 1e-6);
}
