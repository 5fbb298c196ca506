#pragma once

#include <vector>

namespace inflation {

struct Mat2 {
    double a11 = 0.0;
    double a12 = 0.0;
    double a21 = 0.0;
    double a22 = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 diag(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }

    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a21; }
    double max_abs() const;
    bool finite() const;

    Mat2 operator*(const Mat2& o) const
    {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    Mat2 operator+(const Mat2& o) const { return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22}; }
    Mat2 operator-(const Mat2& o) const { return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22}; }
    Mat2 operator*(double s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }

    bool operator==(const Mat2&) const = default;
};

/// e^{tM} in closed form.
Mat2 expm2(const Mat2& M, double t);

/// Largest eigenvalue modulus. Throws ComplexSpectrum if the eigenvalues are
/// not real.
double spectral_radius(const Mat2& M);

/// ln of spectral_radius, safe for matrices whose entries overflow when squared.
double log_spectral_radius(const Mat2& M);

struct Factor {
    Mat2 generator;
    double duration;
};

/// Product of exponentials over one period. `factors` is in time order, so
/// the first factor is the rightmost in `matrix`.
struct PeriodMap {
    Mat2 matrix;
    double period = 0.0;
    std::vector<Factor> factors;

    static PeriodMap compose(std::vector<Factor> factors);

    /// Recomputes the product from `factors`.
    Mat2 recompute() const;

    /// ln(radius)/period: growth per unit time of the linear system.
    double growth_rate() const;
    /// ln(radius)/(period/2): the slope of U = ln(x1 x2), i.e. twice growth_rate.
    double delta() const;
};

/// Generator of the (+-1) model in environment u: diag(u - m - eps, -u - m - eps) + m offdiag.
Mat2 pm_generator(int u, double epsilon, double m);

/// Generator with patch signs (s1, s2): diag(s1 - m - eps, s2 - m - eps) + m offdiag.
Mat2 sign_generator(int s1, int s2, double epsilon, double m);

PeriodMap period_map(double epsilon, double m, double T);

/// Two square waves offset so that the patches share a state for a fraction
/// (1 - phi) of each half-period. Time order: (+,-) for phi T, (+,+) for
/// (1 - phi) T, (-,+) for phi T, (-,-) for (1 - phi) T. phi = 1 is period_map.
PeriodMap phase_shift_map(double epsilon, double m, double T, double phi);

PeriodMap general_rate_map(double r1, double d1, double r2, double d2, double m, double T);

/// ln(spectral radius of period_map)/T.
double delta_spectral(double epsilon, double m, double T);

} // namespace inflation
