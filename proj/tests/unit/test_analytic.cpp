#include "doctest.h"

#include <cmath>

#include "inflation/analytic.hpp"
#include "inflation/errors.hpp"
#include "inflation/matrix.hpp"
#include "inflation/switched.hpp"
#include "oracles.hpp"

using namespace inflation;

TEST_CASE("elementary quantities")
{
    for (double m : {1e-6, 0.01, 0.2, 1.0, 50.0}) {
        CHECK(v_star(m) == doctest::Approx(static_cast<double>(oracle::v_star_bisect(m))).epsilon(1e-14));
    }
    CHECK(critical_migration(0.5) == doctest::Approx(0.75));
    CHECK(no_inflation_T_bound(0.5) == doctest::Approx(std::asinh(4.0 / 3.0)));
    CHECK(std::cosh(a_plus(0.3, 0.2)) == doctest::Approx(2.5));
    CHECK_THROWS_AS(v_star(0.0), InvalidArgument);
}

TEST_CASE("closed form against the Taylor monodromy oracle")
{
    for (double eps : {0.0, 0.1, 0.5, 0.9}) {
        for (double m : {1e-3, 0.05, 0.2, 1.0, 3.0}) {
            for (double T : {0.01, 0.3, 1.0, 5.0, 20.0, 80.0}) {
                const double ref = static_cast<double>(oracle::delta_monodromy(eps, m, T));
                CAPTURE(eps);
                CAPTURE(m);
                CAPTURE(T);
                CHECK(std::abs(delta_closed(eps, m, T) - ref) < 1e-12 * std::max(1.0, std::abs(ref)));
            }
        }
    }
}

TEST_CASE("closed form against brute-force ODE integration")
{
    const double ref = static_cast<double>(oracle::delta_ode(0.5, 0.2, 4.0, 40, 4000));
    CHECK(delta_closed(0.5, 0.2, 4.0) == doctest::Approx(ref).epsilon(1e-9));
}

TEST_CASE("exact values")
{
    for (double T : {0.1, 1.0, 10.0}) {
        CHECK(delta_closed(0.5, 0.0, T) == -1.0);
    }
    // 2(sqrt(1 + m^2) - m) at m = 3/4.
    CHECK(delta_limit_T_inf(0.0, 0.75) == doctest::Approx(1.0));
}

TEST_CASE("orbit amplitude against the Perron-vector oracle")
{
    for (double m : {0.01, 0.2, 1.0, 4.0}) {
        for (double T : {0.1, 1.0, 10.0, 30.0}) {
            CAPTURE(m);
            CAPTURE(T);
            CHECK(p_plus(m, T) == doctest::Approx(static_cast<double>(oracle::orbit_p_plus(m, T))).epsilon(1e-11));
            CHECK(p_plus(m, T) <= v_star(m));
        }
    }
}

TEST_CASE("T* threshold")
{
    const double eps = 0.5;
    const double m = 0.3;
    const double t = threshold_T_star(eps, m);
    CHECK(t > no_inflation_T_bound(eps));
    CHECK(std::abs(delta_closed(eps, m, t)) < 1e-10);
    CHECK(delta_closed(eps, m, 0.99 * t) < 0.0);
    CHECK(delta_closed(eps, m, 1.01 * t) > 0.0);
    CHECK_THROWS_AS(threshold_T_star(eps, 0.75), NoRoot);
    CHECK_THROWS_AS(threshold_T_star(eps, 0.74999, 100.0), BracketFailure);
}

TEST_CASE("m* threshold against a brute scan")
{
    for (double T : {5.0, 10.0, 20.0}) {
        for (double eps : {0.1, 0.25}) {
            const auto r = threshold_m_star(eps, T);
            const double ref = static_cast<double>(oracle::m_star_scan(eps, T, 1e-12, 10.0, 4000));
            CAPTURE(T);
            CAPTURE(eps);
            CHECK(r.m_star == doctest::Approx(ref).epsilon(1e-8));
            CHECK(r.asymptote == doctest::Approx(std::exp(-(1 - eps) * T)));
        }
    }
    CHECK_THROWS_AS(threshold_m_star(0.5, 1.0), NoRoot);
    // Below T** no m helps; at T = 5 the maximum is still just negative.
    CHECK_THROWS_AS(threshold_m_star(0.5, 5.0), NoRoot);
}
