#include "doctest.h"

#include <cmath>

#include "inflation/errors.hpp"
#include "inflation/matrix.hpp"
#include "oracles.hpp"

using namespace inflation;

namespace {

double rel_diff(const Mat2& a, const oracle::M2& b)
{
    const double s = std::max(1e-300, static_cast<double>(std::max({std::fabs(b[0]), std::fabs(b[1]),
                                                                    std::fabs(b[2]), std::fabs(b[3])})));
    return std::max({std::abs(a.a11 - static_cast<double>(b[0])), std::abs(a.a12 - static_cast<double>(b[1])),
                     std::abs(a.a21 - static_cast<double>(b[2])), std::abs(a.a22 - static_cast<double>(b[3]))}) /
           s;
}

} // namespace

TEST_CASE("expm2 against Taylor scaling and squaring")
{
    const Mat2 cases[] = {
        {0, 0, 0, 0}, {1, 0, 0, -1}, {0.5, 0.2, 0.2, -1.5}, {0, 1, -1, 0}, {-3, 2, 1e-9, 4}, {2, 1, 1, 2},
        {1.0 - 0.2 - 0.5, 0.2, 0.2, -1.0 - 0.2 - 0.5}, {0, 1, 0, 0}, {1e-12, 1e-12, 1e-12, 1e-12},
    };
    for (const Mat2& m : cases) {
        for (double t : {1e-6, 0.1, 1.0, 7.0}) {
            CAPTURE(t);
            CHECK(rel_diff(expm2(m, t), oracle::expm_taylor({m.a11, m.a12, m.a21, m.a22}, t)) < 1e-13);
        }
    }
}

TEST_CASE("expm2 of a rotation generator")
{
    const Mat2 e = expm2({0, 1, -1, 0}, M_PI / 2);
    CHECK(std::abs(e.a11) < 1e-15);
    CHECK(e.a12 == doctest::Approx(1.0));
}

TEST_CASE("spectral radius")
{
    CHECK(spectral_radius(Mat2::diag(3.0, -5.0)) == doctest::Approx(5.0));
    CHECK(spectral_radius({2, 1, 1, 2}) == doctest::Approx(3.0));
    CHECK_THROWS_AS(spectral_radius({0, 1, -1, 0}), ComplexSpectrum);
    CHECK(log_spectral_radius({1e200, 1e200, 1e200, 1e200}) == doctest::Approx(std::log(2e200)));
}

TEST_CASE("period map")
{
    const PeriodMap p = period_map(0.5, 0.2, 3.0);
    CHECK(p.period == 6.0);
    REQUIRE(p.factors.size() == 2);
    CHECK(p.factors[0].generator == pm_generator(+1, 0.5, 0.2));
    CHECK(rel_diff(p.matrix, oracle::monodromy(0.5, 0.2, 3.0)) < 1e-13);
    CHECK(p.delta() == doctest::Approx(2.0 * p.growth_rate()));
    CHECK(p.recompute() == p.matrix);
}

TEST_CASE("phase shift map reduces to the period map at phi = 1")
{
    const PeriodMap a = phase_shift_map(0.3, 0.4, 2.0, 1.0);
    const PeriodMap b = period_map(0.3, 0.4, 2.0);
    CHECK(a.delta() == doctest::Approx(b.delta()).epsilon(1e-13));
    // phi = 0: both patches share the state, the mean rate -eps wins.
    CHECK(phase_shift_map(0.3, 0.4, 2.0, 0.0).delta() == doctest::Approx(-0.6).epsilon(1e-12));
}

TEST_CASE("general rates reduce to the symmetric model")
{
    const double eps = 0.2;
    const PeriodMap g = general_rate_map(1 - eps, 1 + eps, 1 - eps, 1 + eps, 0.3, 2.5);
    CHECK(g.delta() == doctest::Approx(delta_spectral(eps, 0.3, 2.5)).epsilon(1e-13));
}

TEST_CASE("phase shift: growth increases with the offset")
{
    const double g1 = phase_shift_map(0.1, 0.5, 5.0, 0.25).growth_rate();
    const double g2 = phase_shift_map(0.1, 0.5, 5.0, 0.5).growth_rate();
    const double g3 = phase_shift_map(0.1, 0.5, 5.0, 1.0).growth_rate();
    CHECK(g1 < g2);
    CHECK(g2 < g3);
}
