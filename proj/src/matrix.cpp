#include "inflation/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "inflation/errors.hpp"

namespace inflation {

using detail::require;

double Mat2::max_abs() const
{
    return std::max({std::abs(a11), std::abs(a12), std::abs(a21), std::abs(a22)});
}

bool Mat2::finite() const
{
    return std::isfinite(a11) && std::isfinite(a12) && std::isfinite(a21) && std::isfinite(a22);
}

Mat2 expm2(const Mat2& M, double t)
{
    require(M.finite(), "expm2: matrix entries must be finite");
    require(std::isfinite(t) && t >= 0.0, "expm2: t must be >= 0");
    const double mu = 0.5 * (M.a11 + M.a22);
    const double n11 = 0.5 * (M.a11 - M.a22);
    const double bc = M.a12 * M.a21;
    const double w2 = n11 * n11 + bc;

    if (w2 > 0.0) {
        const double w = std::sqrt(w2);
        if (w * t > 0.5) {
            // Spectral split: (e^{t l+} (N + wI) - e^{t l-} (N - wI)) / (2w).
            // p1 = w + n11 and p2 = w - n11 are both >= 0; take the one that
            // would cancel from p1 p2 = bc.
            double p1;
            double p2;
            if (n11 >= 0.0) {
                p1 = w + n11;
                p2 = bc / p1;
            } else {
                p2 = w - n11;
                p1 = bc / p2;
            }
            const double ep = std::exp(t * (mu + w)) / (2.0 * w);
            const double em = std::exp(t * (mu - w)) / (2.0 * w);
            return {ep * p1 + em * p2, M.a12 * (ep - em), M.a21 * (ep - em), ep * p2 + em * p1};
        }
    }

    double c;
    double s;  // sinh(t w)/w or sin(t w)/w
    const double z2 = w2 * t * t;
    if (std::abs(z2) < 1e-6) {
        // Series in z2 = (t w)^2, valid for either sign of w2.
        c = 1.0 + z2 / 2.0 * (1.0 + z2 / 12.0 * (1.0 + z2 / 30.0));
        s = t * (1.0 + z2 / 6.0 * (1.0 + z2 / 20.0 * (1.0 + z2 / 42.0)));
    } else if (w2 > 0.0) {
        const double w = std::sqrt(w2);
        c = std::cosh(t * w);
        s = std::sinh(t * w) / w;
    } else {
        const double w = std::sqrt(-w2);
        c = std::cos(t * w);
        s = std::sin(t * w) / w;
    }
    const double e = std::exp(t * mu);
    return {e * (c + s * n11), e * s * M.a12, e * s * M.a21, e * (c - s * n11)};
}

namespace {

// |mu| + sqrt(disc) on a matrix with entries of order one.
double radius_scaled(const Mat2& M)
{
    const double mu = 0.5 * (M.a11 + M.a22);
    const double h = 0.5 * (M.a11 - M.a22);
    const double disc = h * h + M.a12 * M.a21;
    const double scale = std::max(1.0, M.max_abs() * M.max_abs());
    if (disc < -1e-10 * scale) {
        throw ComplexSpectrum("spectral_radius: eigenvalues are complex");
    }
    return std::abs(mu) + std::sqrt(std::max(disc, 0.0));
}

} // namespace

double spectral_radius(const Mat2& M)
{
    require(M.finite(), "spectral_radius: matrix entries must be finite");
    const double s = M.max_abs();
    if (s == 0.0) {
        return 0.0;
    }
    return s * radius_scaled(M * (1.0 / s));
}

double log_spectral_radius(const Mat2& M)
{
    require(M.finite(), "spectral_radius: matrix entries must be finite");
    const double s = M.max_abs();
    if (s == 0.0) {
        return -INFINITY;
    }
    return std::log(s) + std::log(radius_scaled(M * (1.0 / s)));
}

PeriodMap PeriodMap::compose(std::vector<Factor> factors)
{
    PeriodMap p;
    p.factors = std::move(factors);
    p.matrix = p.recompute();
    for (const Factor& f : p.factors) {
        p.period += f.duration;
    }
    return p;
}

Mat2 PeriodMap::recompute() const
{
    Mat2 out = Mat2::identity();
    for (const Factor& f : factors) {
        out = expm2(f.generator, f.duration) * out;
    }
    return out;
}

double PeriodMap::growth_rate() const
{
    if (!(period > 0.0)) {
        throw InvalidArgument("period map has zero length");
    }
    return log_spectral_radius(matrix) / period;
}

double PeriodMap::delta() const { return 2.0 * growth_rate(); }

Mat2 sign_generator(int s1, int s2, double epsilon, double m)
{
    return {s1 - m - epsilon, m, m, s2 - m - epsilon};
}

Mat2 pm_generator(int u, double epsilon, double m)
{
    require(u == 1 || u == -1, "environment state must be +1 or -1");
    return sign_generator(u, -u, epsilon, m);
}

namespace {

void check(double epsilon, double m, double T)
{
    require(std::isfinite(epsilon) && epsilon >= 0.0 && epsilon <= 1.0, "epsilon must lie in [0, 1]");
    require(std::isfinite(m) && m >= 0.0, "m must be >= 0");
    require(std::isfinite(T) && T > 0.0, "T must be > 0");
}

} // namespace

PeriodMap period_map(double epsilon, double m, double T)
{
    check(epsilon, m, T);
    return PeriodMap::compose({{pm_generator(+1, epsilon, m), T}, {pm_generator(-1, epsilon, m), T}});
}

PeriodMap phase_shift_map(double epsilon, double m, double T, double phi)
{
    check(epsilon, m, T);
    require(std::isfinite(phi) && phi >= 0.0 && phi <= 1.0, "phi must lie in [0, 1]");
    const double a = phi * T;
    const double b = (1.0 - phi) * T;
    return PeriodMap::compose({{sign_generator(+1, -1, epsilon, m), a},
                               {sign_generator(+1, +1, epsilon, m), b},
                               {sign_generator(-1, +1, epsilon, m), a},
                               {sign_generator(-1, -1, epsilon, m), b}});
}

PeriodMap general_rate_map(double r1, double d1, double r2, double d2, double m, double T)
{
    require(std::isfinite(r1) && std::isfinite(d1) && std::isfinite(r2) && std::isfinite(d2), "rates must be finite");
    require(std::isfinite(m) && m >= 0.0, "m must be >= 0");
    require(std::isfinite(T) && T > 0.0, "T must be > 0");
    const Mat2 first{r1 - m, m, m, -d2 - m};
    const Mat2 second{-d1 - m, m, m, r2 - m};
    return PeriodMap::compose({{first, T}, {second, T}});
}

double delta_spectral(double epsilon, double m, double T) { return period_map(epsilon, m, T).delta(); }

} // namespace inflation
