#pragma once

namespace inflation {

/// V_m^+ = asinh(1/m), the attracting equilibrium of dV/dt = 2(1 - m sinh V).
double v_star(double m);

/// A^+ = acosh(1 + eps/m): the positive zero of V -> 2(m cosh V - m - eps).
double a_plus(double epsilon, double m);

/// m_c = (1 - eps^2)/(2 eps). Above it the coupled system decays for every T.
double critical_migration(double epsilon);

/// asinh(2 eps/(1 - eps^2)); no growth is possible for half-periods at or below it.
double no_inflation_T_bound(double epsilon);

struct OrbitAmplitude {
    double p_plus;  ///< upper extreme of the periodic V-orbit
    double v_plus;  ///< V_m^+
    double a_plus;  ///< A^+ (0 when epsilon is not supplied)
    double A;       ///< sqrt(1 + m^2)
    double B;       ///< tanh(T A)
    double b;       ///< exp(T A), may be +inf
};

OrbitAmplitude orbit_amplitude(double m, double T, double epsilon = 0.0);

/// Upper extreme P^+ of the periodic orbit in V for half-period T.
double p_plus(double m, double T);

/// Long-run slope of U = ln(x1 x2) for the periodic (+-1) model.
double delta_closed(double epsilon, double m, double T);

/// Limit of delta_closed as T -> infinity: 2(sqrt(1+m^2) - m - eps).
double delta_limit_T_inf(double epsilon, double m);
/// Limit as T -> 0: -2 eps.
double delta_limit_T_zero(double epsilon);
/// Limit as m -> 0 or m -> infinity: -2 eps.
double delta_limit_m(double epsilon);

/// Half-period above which delta_closed(eps, m, .) turns positive.
/// Throws NoRoot when m >= m_c, BracketFailure past T_max.
double threshold_T_star(double epsilon, double m, double T_max = 1e9);

struct MigrationThreshold {
    double m_star;
    double asymptote;  ///< exp(-(1 - eps) T)
};

/// Smallest dispersal rate with delta_closed(eps, m, T) > 0. Throws NoRoot
/// if the exponent stays negative for every m.
MigrationThreshold threshold_m_star(double epsilon, double T);

} // namespace inflation
