#pragma once

#include <functional>
#include <iosfwd>

#include "inflation/model.hpp"

namespace inflation {

/// Stationary law of V for Markov switching at rate 1/T between
/// dV/dt = 2(1 - m sinh V) and dV/dt = -2(1 + m sinh V).
///
/// rho^h(v) = C/|F^h(v)| * G(v)^a on (V^-, V^+), a = 1/(2 T sqrt(1 + m^2)),
/// G(v) = (e^{V+} - e^v)(e^v - e^{V-}) / ((e^v + e^{V-})(e^v + e^{V+})).
class InvariantDensity {
public:
    InvariantDensity(double m, double T);

    double m() const noexcept { return m_; }
    double T() const noexcept { return T_; }
    double v_plus() const noexcept { return v_plus_; }
    double exponent() const noexcept { return a_; }
    /// a - 1: rho behaves like (distance to an endpoint)^tail_exponent there.
    double tail_exponent() const noexcept { return a_ - 1.0; }
    /// ln C; C itself may overflow for very small T.
    double log_normalizer() const noexcept { return log_c_; }
    double normalizer() const;
    /// Achieved error estimate of the normalizing quadrature.
    double normalization_error() const noexcept { return norm_error_; }

    /// True iff rho stays bounded near V^+ and V^-, i.e. 2 T sqrt(1 + m^2) <= 1.
    bool bounded_at_endpoints() const noexcept { return a_ >= 1.0; }

    double rho_plus(double v) const;
    double rho_minus(double v) const;
    double rho(double v) const;
    double operator()(double v) const { return rho(v); }

    /// Integral of f * rho over [lo, hi], clipped to (V^-, V^+). Endpoint
    /// pieces are integrated in y = -ln(distance to the endpoint).
    double integrate(const std::function<double(double)>& f, double lo, double hi, double* error = nullptr) const;
    double integrate(const std::function<double(double)>& f, double* error = nullptr) const;

    /// Probability mass of [lo, hi].
    double mass(double lo, double hi) const;

    /// CSV `v,rho_plus,rho_minus,rho` on n interior points.
    void write_csv(std::ostream& out, std::size_t n) const;

private:
    struct LogParts {
        double plus;   // ln rho^+ - ln C, without the distance factors
        double minus;
    };
    // ln(rho^h / C) at v given accurate endpoint distances and their logs.
    LogParts log_parts(double v, double d_plus, double d_minus, double ln_d_plus, double ln_d_minus) const;
    double raw(const std::function<double(double)>& f, double lo, double hi, double* error) const;

    double m_;
    double T_;
    double A_;
    double v_plus_;
    double a_;
    double split_;
    double ref_ = 0.0;  // ln of the unnormalized total density at v = 0
    double log_c_ = 0.0;
    double norm_error_ = 0.0;
};

InvariantDensity invariant_density(double m, double T);

/// Long-run slope of U under Markov switching at rate 1/T, as the
/// integral of 2(m cosh v - m - eps) against the invariant density.
GrowthReport delta_pdmp_quadrature(double epsilon, double m, double T);

} // namespace inflation
