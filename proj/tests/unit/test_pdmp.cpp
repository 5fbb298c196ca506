#include "doctest.h"

#include <cmath>

#include "inflation/analytic.hpp"
#include "inflation/density.hpp"
#include "inflation/errors.hpp"
#include "inflation/pdmp.hpp"

using namespace inflation;

TEST_CASE("runs are deterministic in (seed, stream)")
{
    const auto a = simulate_pdmp(0.5, 0.2, 1.0, 2000.0, 7);
    const auto b = simulate_pdmp(0.5, 0.2, 1.0, 2000.0, 7);
    PdmpOptions o;
    o.stream = 1;
    const auto c = simulate_pdmp(0.5, 0.2, 1.0, 2000.0, 7, o);
    CHECK(a.report.value == b.report.value);
    CHECK(a.report.value != c.report.value);
    CHECK(*a.report.seed == 7);
}

TEST_CASE("V stays inside the invariant interval")
{
    PdmpOptions o;
    o.v0 = 0.0;
    const auto r = simulate_pdmp(0.5, 0.2, 0.4, 5000.0, 3, o);
    CHECK(r.v_max < v_star(0.2));
    CHECK(r.v_min > -v_star(0.2));
    CHECK(r.cycles > 100);
}

TEST_CASE("Monte Carlo agrees with the density quadrature")
{
    const double ref = delta_pdmp_quadrature(0.5, 0.2, 2.5).value;
    const auto r = simulate_pdmp(0.5, 0.2, 0.4, 1e5, 11).report;
    CHECK(std::abs(r.value - ref) < 4.0 * *r.std_error);
    const auto p = lyapunov_polar(0.5, 0.2, 0.4, 1e5, 12);
    CHECK(std::abs(2.0 * p.value - ref) < 4.0 * 2.0 * *p.std_error);
}

TEST_CASE("fast switching gives decline")
{
    const auto r = simulate_pdmp(0.5, 0.2, 5.0, 2e4, 5).report;
    CHECK(r.value + 3.0 * *r.std_error < 0.0);
}

TEST_CASE("periodic signal through the event engine matches the closed form")
{
    const auto r = simulate_switching(0.5, 0.2, EnvironmentSignal::periodic(4.0), 4000.0, 1).report;
    CHECK(r.value == doctest::Approx(delta_closed(0.5, 0.2, 4.0)).epsilon(1e-9));
    CHECK(simulate_sape(0.5, 0.2, 4.0, 0.0, 4000.0, 1).value ==
          doctest::Approx(delta_closed(0.5, 0.2, 4.0)).epsilon(1e-9));
}

TEST_CASE("horizon guards")
{
    CHECK_THROWS_AS(simulate_pdmp(0.5, 0.2, 0.4, 10.0, 1), InvalidArgument);
    CHECK_THROWS_AS(simulate_sape(0.5, 0.2, 4.0, 0.1, 50.0, 1), InvalidArgument);
}

TEST_CASE("histogram and L1 distance")
{
    const InvariantDensity rho(0.2, 2.5);
    PdmpOptions o;
    o.sample_dt = 0.5;
    const auto r = simulate_pdmp(0.5, 0.2, 0.4, 2e5, 21, o);
    const auto h = empirical_density(r.v_samples, 50, rho);
    double total = 0.0;
    for (double d : h.density) total += d * h.width();
    CHECK(total == doctest::Approx(1.0));
    CHECK(l1_distance(h, rho) < 0.1);
}

TEST_CASE("ratio batch means")
{
    const std::vector<double> num{1, 2, 3, 4};
    const std::vector<double> den{1, 1, 1, 1};
    const auto b = ratio_batch_means(num, den);
    CHECK(b.mean == doctest::Approx(2.5));
    CHECK(b.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
}
