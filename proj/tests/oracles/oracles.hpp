#pragma once

// Reference computations built from first principles in long double. They
// share no code with the library: Taylor exponentials instead of closed
// forms, RK4 instead of exact flows, brute scans instead of bracketing.

#include <array>
#include <cmath>
#include <functional>
#include <utility>

namespace oracle {

using Real = long double;
using M2 = std::array<Real, 4>;  // row major

inline M2 mul(const M2& a, const M2& b)
{
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

/// e^{tM} by scaling and squaring of a 40-term Taylor series.
inline M2 expm_taylor(M2 a, Real t)
{
    for (auto& x : a) x *= t;
    Real norm = 0;
    for (auto x : a) norm = std::max(norm, std::fabs(x));
    int squarings = 0;
    while (norm > 0.25L) {
        norm *= 0.5L;
        ++squarings;
    }
    for (auto& x : a) x = std::ldexp(x, -squarings);
    M2 sum{1, 0, 0, 1};
    M2 term{1, 0, 0, 1};
    for (int k = 1; k <= 40; ++k) {
        term = mul(term, a);
        for (auto& x : term) x /= k;
        for (int i = 0; i < 4; ++i) sum[i] += term[i];
    }
    for (int s = 0; s < squarings; ++s) sum = mul(sum, sum);
    return sum;
}

inline M2 generator(int u, Real eps, Real m) { return {u - m - eps, m, m, -u - m - eps}; }

/// Period map E(-) E(+) (first +1 for T, then -1 for T).
inline M2 monodromy(Real eps, Real m, Real T)
{
    return mul(expm_taylor(generator(-1, eps, m), T), expm_taylor(generator(+1, eps, m), T));
}

/// Dominant eigenvalue of a positive 2x2 matrix from its characteristic polynomial.
inline Real perron_root(const M2& a)
{
    const Real h = 0.5L * (a[0] + a[3]);
    const Real d = 0.5L * (a[0] - a[3]);
    return h + std::sqrt(d * d + a[1] * a[2]);
}

/// Slope of ln(x1 x2): twice the top exponent, ln(root)/T.
inline Real delta_monodromy(Real eps, Real m, Real T)
{
    return std::log(perron_root(monodromy(eps, m, T))) / T;
}

/// Brute force: RK4 on the linear system over `periods` periods after a
/// warm-up of the same length, renormalizing each step.
inline Real delta_ode(Real eps, Real m, Real T, int periods, int steps_per_half)
{
    Real x1 = 1, x2 = 1, log_total = 0;
    const Real h = T / steps_per_half;
    auto rhs = [&](int u, Real a, Real b, Real& da, Real& db) {
        da = (u - eps) * a + m * (b - a);
        db = (-u - eps) * b + m * (a - b);
    };
    auto half = [&](int u) {
        for (int k = 0; k < steps_per_half; ++k) {
            Real k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
            rhs(u, x1, x2, k1a, k1b);
            rhs(u, x1 + 0.5L * h * k1a, x2 + 0.5L * h * k1b, k2a, k2b);
            rhs(u, x1 + 0.5L * h * k2a, x2 + 0.5L * h * k2b, k3a, k3b);
            rhs(u, x1 + h * k3a, x2 + h * k3b, k4a, k4b);
            x1 += h / 6 * (k1a + 2 * k2a + 2 * k3a + k4a);
            x2 += h / 6 * (k1b + 2 * k2b + 2 * k3b + k4b);
            const Real s = x1 + x2;
            x1 /= s;
            x2 /= s;
            log_total += std::log(s);
        }
    };
    for (int p = 0; p < periods; ++p) {
        half(+1);
        half(-1);
    }
    log_total = 0;
    for (int p = 0; p < periods; ++p) {
        half(+1);
        half(-1);
    }
    // x1 x2 grows like (x1 + x2)^2 along the attracting direction.
    return 2 * log_total / (2 * periods * T);
}

/// Root of m sinh v = 1 by bisection.
inline Real v_star_bisect(Real m)
{
    Real lo = 0, hi = 1;
    while (m * std::sinh(hi) < 1) hi *= 2;
    for (int i = 0; i < 200; ++i) {
        const Real mid = 0.5L * (lo + hi);
        (m * std::sinh(mid) < 1 ? lo : hi) = mid;
    }
    return 0.5L * (lo + hi);
}

/// RK4 for dV/dt = 2(u - m sinh V).
inline Real flow_rk4(Real v, int u, Real m, Real t, Real dt = 1e-4L)
{
    const int n = std::max(1, static_cast<int>(std::ceil(t / dt)));
    const Real h = t / n;
    auto f = [&](Real x) { return 2 * (u - m * std::sinh(x)); };
    for (int k = 0; k < n; ++k) {
        const Real k1 = f(v), k2 = f(v + 0.5L * h * k1), k3 = f(v + 0.5L * h * k2), k4 = f(v + h * k3);
        v += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return v;
}

/// Upper extreme of the periodic V-orbit from the Perron vector of the
/// period map: the orbit starts at ln(e1/e2) and P+ is reached after the
/// +1 phase.
inline Real orbit_p_plus(Real m, Real T)
{
    const M2 p = monodromy(0, m, T);
    const Real lambda = perron_root(p);
    // (P - lambda) e = 0 with e = (a12, lambda - a11).
    const Real e1 = p[1], e2 = lambda - p[0];
    const M2 plus = expm_taylor(generator(+1, 0, m), T);
    const Real y1 = plus[0] * e1 + plus[1] * e2;
    const Real y2 = plus[2] * e1 + plus[3] * e2;
    return std::log(y1 / y2);
}

/// Smallest m on a log scan with positive exponent, refined by bisection.
/// Returns NaN when the scan finds none.
inline Real m_star_scan(Real eps, Real T, Real lo, Real hi, int points)
{
    Real prev = lo;
    for (int i = 1; i < points; ++i) {
        const Real m = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (points - 1));
        if (delta_monodromy(eps, m, T) > 0) {
            Real a = prev, b = m;
            for (int k = 0; k < 200; ++k) {
                const Real mid = std::sqrt(a * b);
                (delta_monodromy(eps, mid, T) > 0 ? b : a) = mid;
            }
            return std::sqrt(a * b);
        }
        prev = m;
    }
    return NAN;
}

/// Residuals of the stationary forward equations
/// (F+ rho+)' = s (rho- - rho+), (F- rho-)' = s (rho+ - rho-), F+- = 2(+-1 - m sinh v),
/// by central differences with step h, relative to the local flux scale.
inline std::pair<Real, Real> fokker_planck_residual(const std::function<Real(Real)>& rho_plus,
                                                    const std::function<Real(Real)>& rho_minus, Real m,
                                                    Real rate, Real v, Real h)
{
    auto fp = [&](Real x) { return 2 * (1 - m * std::sinh(x)) * rho_plus(x); };
    auto fm = [&](Real x) { return 2 * (-1 - m * std::sinh(x)) * rho_minus(x); };
    const Real dp = (fp(v + h) - fp(v - h)) / (2 * h);
    const Real dm = (fm(v + h) - fm(v - h)) / (2 * h);
    const Real src = rate * (rho_minus(v) - rho_plus(v));
    const Real scale = std::fabs(dp) + std::fabs(src) + rate * (rho_plus(v) + rho_minus(v));
    return {(dp - src) / scale, (dm + src) / scale};
}

} // namespace oracle
