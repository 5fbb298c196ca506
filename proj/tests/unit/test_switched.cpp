#include "doctest.h"

#include <cmath>

#include "inflation/analytic.hpp"
#include "inflation/errors.hpp"
#include "inflation/switched.hpp"
#include "oracles.hpp"

using namespace inflation;

TEST_CASE("exact flow against RK4")
{
    for (double m : {0.01, 0.2, 1.0, 5.0}) {
        for (int s : {+1, -1}) {
            for (double v0 : {-3.0, -0.5, 0.0, 1.0, 4.0}) {
                for (double t : {0.01, 0.5, 3.0}) {
                    CAPTURE(m);
                    CAPTURE(s);
                    CAPTURE(v0);
                    CAPTURE(t);
                    const double ref = static_cast<double>(oracle::flow_rk4(v0, s, m, t, 1e-5L));
                    CHECK(flow_exact(v0, s, m, t) == doctest::Approx(ref).epsilon(1e-11));
                }
            }
        }
    }
}

TEST_CASE("exact flow fixed points and symmetry")
{
    CHECK(flow_exact(v_star(0.3), +1, 0.3, 10.0) == doctest::Approx(v_star(0.3)));
    CHECK(flow_exact(0.7, -1, 0.3, 1.3) == doctest::Approx(-flow_exact(-0.7, +1, 0.3, 1.3)));
    CHECK(flow_exact(1.0, +1, 0.0, 2.0) == doctest::Approx(5.0));
}

TEST_CASE("U increment along the flow")
{
    // Integrate 2(m cosh V - m - eps) with the RK4 oracle path.
    const double m = 0.4, eps = 0.3, v0 = -1.0, tau = 1.7;
    const int n = 20000;
    double acc = 0.0;
    double v = v0;
    const double h = tau / n;
    for (int k = 0; k < n; ++k) {
        const double a = v;
        const double mid = static_cast<double>(oracle::flow_rk4(a, +1, m, 0.5 * h, h));
        const double b = static_cast<double>(oracle::flow_rk4(a, +1, m, h, h));
        auto g = [&](double x) { return 2 * (m * std::cosh(x) - m - eps); };
        acc += h / 6 * (g(a) + 4 * g(mid) + g(b));
        v = b;
    }
    CHECK(flow_u_increment(v0, flow_exact(v0, +1, m, tau), +1, m, eps, tau) == doctest::Approx(acc).epsilon(1e-9));
}

TEST_CASE("periodic orbit and quadrature")
{
    for (double m : {0.01, 0.2, 2.0}) {
        for (double T : {0.2, 2.0, 15.0}) {
            const auto o = periodic_orbit(m, T);
            CHECK(o.p_plus == doctest::Approx(p_plus(m, T)).epsilon(1e-10));
            CHECK(o.p_minus == doctest::Approx(-o.p_plus).epsilon(1e-10));
            CHECK(delta_quadrature(0.3, m, T).value == doctest::Approx(delta_closed(0.3, m, T)).epsilon(1e-10));
        }
    }
    CHECK_THROWS_AS(delta_quadrature(0.3, 0.2, 1.0, 8), InvalidArgument);
}

TEST_CASE("RK4 integration tracks the period-map growth")
{
    ModelParams p;
    p.epsilon = 0.1;
    p.m = 0.3;
    p.T = 2.0;
    const double horizon = 400.0;
    const auto env = EnvironmentPath::realize(EnvironmentSignal::periodic(p.T), horizon, 1);
    const auto tr = integrate_switched(p, env, {1.0, 1.0}, horizon, 0.0, Coords::UV);
    const double u0 = tr.state(0)[0];
    // Compare slopes over complete periods after a warm-up.
    std::size_t i40 = 0;
    while (tr.time(i40) < 40.0 - 1e-9) ++i40;
    const double slope = (tr.back()[0] - tr.state(i40)[0]) / (horizon - tr.time(i40));
    CHECK(slope == doctest::Approx(delta_closed(p.epsilon, p.m, p.T)).epsilon(1e-6));
    (void)u0;
}

TEST_CASE("large X trajectories continue in (U, V)")
{
    ModelParams p;
    p.epsilon = 0.0;
    p.m = 0.5;
    p.T = 100.0;
    p.rates = SquareRates{3.0, -1.0, 3.0, -1.0};
    const auto env = EnvironmentPath::realize(EnvironmentSignal::periodic(p.T), 200.0, 1);
    const auto tr = integrate_switched(p, env, {1.0, 1.0}, 200.0);
    CHECK(tr.coords() == Coords::UV);
    CHECK_FALSE(tr.notes().empty());
    CHECK(std::isfinite(tr.back()[0]));
}

TEST_CASE("asymmetric dispersal keeps the (U, V) identity")
{
    ModelParams p;
    p.epsilon = 0.2;
    p.m = 0.6;
    p.T = 1.5;
    p.beta_disp = 0.3;
    const auto env = EnvironmentPath::realize(EnvironmentSignal::periodic(p.T), 30.0, 1);
    const auto run = integrate_asymmetric(p, env, {1.0, 2.0}, 30.0);
    CHECK(run.max_residual < 1e-6);
}

TEST_CASE("strong dispersal approaches perfect mixing")
{
    ModelParams p;
    p.epsilon = 0.1;
    p.m = 2000.0;
    p.T = 1.0;
    p.beta_disp = 0.4;
    const auto env = EnvironmentPath::realize(EnvironmentSignal::periodic(p.T), 5.0, 1);
    const auto tr = integrate_switched(p, env, {0.4, 0.6}, 5.0, 1e-4);
    const auto ref = perfect_mixing_reference(p, env, {0.4, 0.6}, 5.0);
    CHECK(tr.back()[0] == doctest::Approx(ref[0]).epsilon(1e-3));
    CHECK(tr.back()[1] == doctest::Approx(ref[1]).epsilon(1e-3));
}

TEST_CASE("positivity guard gives up loudly")
{
    // A constant drain crosses zero at t = 1 whatever the step.
    const VectorField f = [](double, std::span<const double>, int, std::span<double> dx) {
        dx[0] = -1.0;
        dx[1] = 0.0;
    };
    const std::vector<Segment> seg{{0.0, 2.0, 1}};
    CHECK_THROWS_AS(integrate_rk4(f, Coords::X, {1.0, 1.0}, seg, {0.3, Guard::NonNegative, 1}), StepSizeCollapse);
    CHECK_NOTHROW(integrate_rk4(f, Coords::X, {1.0, 1.0}, seg, {0.3, Guard::None, 1}));
}
