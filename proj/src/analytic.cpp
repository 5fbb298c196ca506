#include "inflation/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "inflation/errors.hpp"

namespace inflation {

using detail::require;

namespace {

bool finite(double x) { return std::isfinite(x); }

void check_epsilon(double epsilon)
{
    require(finite(epsilon) && epsilon >= 0.0 && epsilon <= 1.0, "epsilon must lie in [0, 1]");
}

// sech(x) for x >= 0 without overflow.
double sech(double x)
{
    const double e = std::exp(-x);
    return 2.0 * e / (1.0 + e * e);
}

// Bisection on a sign change f(lo) <= 0 < f(hi), to relative width `rtol`.
template <class F>
double bisect(F&& f, double lo, double hi, double rtol)
{
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= rtol * std::max(std::abs(lo), std::abs(hi)) || mid == lo || mid == hi) {
            break;
        }
        (f(mid) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

double v_star(double m)
{
    require(finite(m) && m > 0.0, "v_star needs m > 0");
    return std::asinh(1.0 / m);
}

double a_plus(double epsilon, double m)
{
    check_epsilon(epsilon);
    require(finite(m) && m > 0.0, "a_plus needs m > 0");
    // acosh(1 + x) = log1p(x + sqrt(x (2 + x)))
    const double x = epsilon / m;
    return std::log1p(x + std::sqrt(x * (2.0 + x)));
}

double critical_migration(double epsilon)
{
    check_epsilon(epsilon);
    require(epsilon > 0.0, "critical migration is infinite at epsilon = 0");
    return (1.0 - epsilon) * (1.0 + epsilon) / (2.0 * epsilon);
}

double no_inflation_T_bound(double epsilon)
{
    check_epsilon(epsilon);
    require(epsilon < 1.0, "no_inflation_T_bound needs epsilon < 1");
    return std::asinh(2.0 * epsilon / ((1.0 - epsilon) * (1.0 + epsilon)));
}

OrbitAmplitude orbit_amplitude(double m, double T, double epsilon)
{
    require(finite(m) && m > 0.0, "orbit amplitude needs m > 0");
    require(finite(T) && T > 0.0, "orbit amplitude needs T > 0");
    OrbitAmplitude o{};
    o.A = std::hypot(1.0, m);
    o.B = std::tanh(T * o.A);
    o.b = std::exp(T * o.A);
    o.v_plus = v_star(m);
    o.a_plus = epsilon > 0.0 ? a_plus(epsilon, m) : 0.0;
    const double sh = sech(T * o.A);
    const double s = std::sqrt(m * m + sh * sh);  // sqrt(A^2 - B^2)
    // P = 2 atanh(x), x = B/(A + s); 1 - x rewritten to avoid cancellation.
    const double one_minus = (s * s / (o.A + o.B) + s);
    const double one_plus = o.A + s + o.B;
    // Rounding can land one ulp above the equilibrium the orbit never reaches.
    o.p_plus = std::min(std::log(one_plus / one_minus), o.v_plus);
    return o;
}

double p_plus(double m, double T) { return orbit_amplitude(m, T).p_plus; }

double delta_closed(double epsilon, double m, double T)
{
    check_epsilon(epsilon);
    require(finite(m) && m >= 0.0, "m must be >= 0");
    require(finite(T) && T > 0.0, "T must be > 0");
    if (m == 0.0) {
        return -2.0 * epsilon;
    }
    const double A = std::hypot(1.0, m);
    const double x = 2.0 * T * A;
    const double q = std::exp(-x);
    const double omq = -std::expm1(-x);  // 1 - q
    const double root = std::sqrt(m * m * (1.0 + q) * (1.0 + q) + 4.0 * q);
    if (x < 30.0) {
        const double excess = (m * m * omq * omq + m * omq * root) / (2.0 * (1.0 + m * m) * q);
        return std::log1p(excess) / T - 2.0 * (m + epsilon);
    }
    const double num = m * m + 2.0 * q + m * m * q * q + m * omq * root;
    return (std::log(num) - std::log(2.0 * (1.0 + m * m))) / T + 2.0 / (A + m) - 2.0 * epsilon;
}

double delta_limit_T_inf(double epsilon, double m)
{
    check_epsilon(epsilon);
    require(finite(m) && m >= 0.0, "m must be >= 0");
    return 2.0 / (std::hypot(1.0, m) + m) - 2.0 * epsilon;
}

double delta_limit_T_zero(double epsilon)
{
    check_epsilon(epsilon);
    return -2.0 * epsilon;
}

double delta_limit_m(double epsilon)
{
    check_epsilon(epsilon);
    return -2.0 * epsilon;
}

double threshold_T_star(double epsilon, double m, double T_max)
{
    check_epsilon(epsilon);
    require(epsilon > 0.0 && epsilon < 1.0, "threshold_T_star needs 0 < epsilon < 1");
    require(finite(m) && m > 0.0, "threshold_T_star needs m > 0");
    require(T_max > 0.0, "T_max must be > 0");
    if (m >= critical_migration(epsilon)) {
        throw NoRoot("no threshold half-period: m >= critical migration, the exponent is negative for every T");
    }
    auto f = [&](double T) { return delta_closed(epsilon, m, T); };
    double lo = no_inflation_T_bound(epsilon);
    if (f(lo) > 0.0) {
        throw NumericalFailure("exponent positive at the no-growth bound");
    }
    double hi = std::max(2.0 * lo, 1.0);
    while (f(hi) <= 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > T_max) {
            throw BracketFailure("threshold_T_star: no sign change below T_max = " + std::to_string(T_max));
        }
    }
    return bisect(f, lo, hi, 1e-12);
}

MigrationThreshold threshold_m_star(double epsilon, double T)
{
    check_epsilon(epsilon);
    require(epsilon > 0.0 && epsilon < 1.0, "threshold_m_star needs 0 < epsilon < 1");
    require(finite(T) && T > 0.0, "T must be > 0");
    auto g = [&](double lm) { return delta_closed(epsilon, std::exp(lm), T); };

    double lo = -(1.0 + epsilon) * T * 1.5;
    const double hi = std::log(critical_migration(epsilon));
    // The lower end must see the negative m -> 0 limit.
    while (g(lo) > 0.0) {
        lo -= std::max(1.0, 0.5 * std::abs(lo));
        if (lo < -700.0) {
            throw NumericalFailure("threshold_m_star: exponent still positive at m = 1e-304");
        }
    }

    constexpr int n = 160;
    const double step = (hi - lo) / n;
    int first = -1;
    int best = 0;
    double best_val = -INFINITY;
    for (int i = 0; i <= n; ++i) {
        const double val = g(lo + i * step);
        if (val > best_val) {
            best_val = val;
            best = i;
        }
        if (val > 0.0) {
            first = i;
            break;
        }
    }
    double top = lo + first * step;
    double bottom = lo + std::max(first - 1, 0) * step;
    if (first < 0) {
        bottom = lo + std::max(best - 1, 0) * step;
        // Refine the maximum: the positive window may be narrower than a cell.
        double a = lo + std::max(best - 1, 0) * step;
        double b = lo + std::min(best + 1, n) * step;
        const double r = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - r * (b - a);
        double d = a + r * (b - a);
        double gc = g(c);
        double gd = g(d);
        for (int it = 0; it < 200 && b - a > 1e-13 * std::max(1.0, std::abs(a)); ++it) {
            if (gc > gd) {
                b = d;
                d = c;
                gd = gc;
                c = b - r * (b - a);
                gc = g(c);
            } else {
                a = c;
                c = d;
                gc = gd;
                d = a + r * (b - a);
                gd = g(d);
            }
        }
        top = gc > gd ? c : d;
        if (std::max(gc, gd) <= 0.0) {
            throw NoRoot("threshold_m_star: the exponent is negative for every m at this T");
        }
    }
    const double lm = bisect(g, bottom, top, 1e-13);
    return {std::exp(lm), std::exp(-(1.0 - epsilon) * T)};
}

} // namespace inflation
