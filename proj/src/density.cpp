#include "inflation/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "inflation/analytic.hpp"
#include "inflation/errors.hpp"

namespace inflation {

using detail::require;

namespace {

constexpr double kTol = 1e-12;

// ln(expm1(x)/x) and ln(-expm1(-x)/x), continuous at x = 0.
double ln_em1_ratio(double x)
{
    if (x < 1e-8) {
        return 0.5 * x;
    }
    if (x > 30.0) {
        return x + std::log1p(-std::exp(-x)) - std::log(x);
    }
    return std::log(std::expm1(x) / x);
}

double ln_1me_ratio(double x)
{
    if (x < 1e-8) {
        return -0.5 * x;
    }
    return std::log(-std::expm1(-x) / x);
}

// ln(e^x + e^y)
double log_add(double x, double y)
{
    const double hi = std::max(x, y);
    return hi + std::log1p(std::exp(std::min(x, y) - hi));
}

} // namespace

InvariantDensity::InvariantDensity(double m, double T) : m_(m), T_(T)
{
    require(std::isfinite(m) && m > 0.0, "invariant density needs m > 0");
    require(std::isfinite(T) && T > 0.0, "invariant density needs T > 0");
    A_ = std::hypot(1.0, m);
    v_plus_ = v_star(m);
    a_ = 1.0 / (2.0 * T * A_);
    split_ = 0.5 * v_plus_;
    const LogParts p0 = log_parts(0.0, v_plus_, v_plus_, std::log(v_plus_), std::log(v_plus_));
    ref_ = log_add(p0.plus, p0.minus);
    double err = 0.0;
    const double z = raw([](double) { return 1.0; }, -v_plus_, v_plus_, &err);
    if (!(z > 0.0) || !std::isfinite(z)) {
        throw NumericalFailure("invariant density: normalizing integral is not positive and finite");
    }
    log_c_ = -ref_ - std::log(z);
    norm_error_ = err / z;
    if (norm_error_ > 1e-8) {
        std::ostringstream msg;
        msg << "invariant density: normalization reached only relative accuracy " << norm_error_;
        throw NumericalFailure(msg.str());
    }
}

double InvariantDensity::normalizer() const { return std::exp(log_c_); }

InvariantDensity::LogParts InvariantDensity::log_parts(double v, double d_plus, double d_minus, double ln_d_plus,
                                                       double ln_d_minus) const
{
    // e^{V+} - e^v = e^v expm1(d+),  e^v - e^{V-} = e^v (-expm1(-d-))
    const double ln_gap_plus = v + ln_d_plus + ln_em1_ratio(d_plus);
    const double ln_gap_minus = v + ln_d_minus + ln_1me_ratio(d_minus);
    const double ln_sum_minus = log_add(v, -v_plus_);  // ln(e^v + e^{V-})
    const double ln_sum_plus = log_add(v, v_plus_);    // ln(e^v + e^{V+})
    const double ln_g = ln_gap_plus + ln_gap_minus - ln_sum_minus - ln_sum_plus;
    const double ln_m = std::log(m_);
    // |F+| = m e^{-v} (e^{V+} - e^v)(e^v + e^{V-}),  |F-| = m e^{-v} (e^v + e^{V+})(e^v - e^{V-})
    const double ln_f_plus = ln_m - v + ln_gap_plus + ln_sum_minus;
    const double ln_f_minus = ln_m - v + ln_sum_plus + ln_gap_minus;
    return {a_ * ln_g - ln_f_plus, a_ * ln_g - ln_f_minus};
}

double InvariantDensity::raw(const std::function<double(double)>& f, double lo, double hi, double* error) const
{
    using boost::math::quadrature::exp_sinh;
    using boost::math::quadrature::gauss_kronrod;
    lo = std::max(lo, -v_plus_);
    hi = std::min(hi, v_plus_);
    double total = 0.0;
    double err_total = 0.0;
    if (!(hi > lo)) {
        if (error) *error = 0.0;
        return 0.0;
    }

    const double inner = v_plus_ - split_;
    // Interior piece, scaled by exp(-ref_).
    const double a = std::max(lo, -inner);
    const double b = std::min(hi, inner);
    if (b > a) {
        auto g = [&](double v) {
            const double dp = v_plus_ - v;
            const double dm = v + v_plus_;
            const LogParts p = log_parts(v, dp, dm, std::log(dp), std::log(dm));
            return f(v) * (std::exp(p.plus - ref_) + std::exp(p.minus - ref_));
        };
        // Over a unit-width variable, so the integrand and its error are O(1).
        const double w = b - a;
        auto gx = [&](double x) { return g(a + w * x); };
        double e = 0.0;
        total += w * gauss_kronrod<double, 31>::integrate(gx, 0.0, 1.0, 20, kTol, &e);
        err_total += w * e;
    }

    // Endpoint pieces: distance s = e^{-y} to the endpoint, ds = s dy.
    auto tail = [&](int side, double s_lo, double s_hi) {
        if (!(s_hi > s_lo)) {
            return;
        }
        // Integrand measured in units of s_hi.
        const double ln_s_hi = std::log(s_hi);
        auto g = [&](double y) {
            const double ln_s = -y;
            const double s = std::exp(ln_s);
            const double v = side > 0 ? v_plus_ - s : -v_plus_ + s;
            const double far = 2.0 * v_plus_ - s;
            const LogParts p = side > 0 ? log_parts(v, s, far, ln_s, std::log(far))
                                        : log_parts(v, far, s, std::log(far), ln_s);
            return f(v) * (std::exp(p.plus - ref_ + ln_s - ln_s_hi) + std::exp(p.minus - ref_ + ln_s - ln_s_hi));
        };
        const double y_lo = -ln_s_hi;
        double e = 0.0;
        if (s_lo > 0.0) {
            total += s_hi * gauss_kronrod<double, 31>::integrate(g, y_lo, -std::log(s_lo), 20, kTol, &e);
        } else {
            // The integrand decays like e^{-a y}; stretch y so the decay length is O(1).
            const double k = std::min(1.0, a_);
            auto h = [&](double z) { return g(y_lo + z / k) / k; };
            exp_sinh<double> integrator;
            total += s_hi * integrator.integrate(h, 0.0, std::numeric_limits<double>::infinity(), kTol, &e);
        }
        err_total += s_hi * e;
    };
    if (hi > inner) {
        tail(+1, v_plus_ - hi, v_plus_ - std::max(lo, inner));
    }
    if (lo < -inner) {
        tail(-1, lo + v_plus_, std::min(hi, -inner) + v_plus_);
    }
    if (error) *error = err_total;
    return total;
}

double InvariantDensity::integrate(const std::function<double(double)>& f, double lo, double hi, double* error) const
{
    double e = 0.0;
    const double r = raw(f, lo, hi, &e);
    const double scale = std::exp(log_c_ + ref_);
    if (error) *error = e * scale;
    return r * scale;
}

double InvariantDensity::integrate(const std::function<double(double)>& f, double* error) const
{
    return integrate(f, -v_plus_, v_plus_, error);
}

double InvariantDensity::mass(double lo, double hi) const
{
    return integrate([](double) { return 1.0; }, lo, hi);
}

double InvariantDensity::rho_plus(double v) const
{
    if (!(v > -v_plus_ && v < v_plus_)) {
        return 0.0;
    }
    const double dp = v_plus_ - v;
    const double dm = v + v_plus_;
    return std::exp(log_c_ + log_parts(v, dp, dm, std::log(dp), std::log(dm)).plus);
}

double InvariantDensity::rho_minus(double v) const
{
    if (!(v > -v_plus_ && v < v_plus_)) {
        return 0.0;
    }
    const double dp = v_plus_ - v;
    const double dm = v + v_plus_;
    return std::exp(log_c_ + log_parts(v, dp, dm, std::log(dp), std::log(dm)).minus);
}

double InvariantDensity::rho(double v) const { return rho_plus(v) + rho_minus(v); }

void InvariantDensity::write_csv(std::ostream& out, std::size_t n) const
{
    require(n >= 2, "density grid needs at least 2 points");
    out << "v,rho_plus,rho_minus,rho\n";
    const auto old = out.precision(17);
    for (std::size_t i = 0; i < n; ++i) {
        // Cell midpoints: the endpoints themselves may be singular.
        const double v = -v_plus_ + (static_cast<double>(i) + 0.5) * (2.0 * v_plus_ / static_cast<double>(n));
        const double rp = rho_plus(v);
        const double rm = rho_minus(v);
        out << v << ',' << rp << ',' << rm << ',' << rp + rm << '\n';
    }
    out.precision(old);
}

InvariantDensity invariant_density(double m, double T) { return InvariantDensity(m, T); }

GrowthReport delta_pdmp_quadrature(double epsilon, double m, double T)
{
    require(std::isfinite(epsilon) && epsilon >= 0.0 && epsilon <= 1.0, "epsilon must lie in [0, 1]");
    const InvariantDensity rho(m, T);
    // 2m(cosh v - 1) = 4m sinh^2(v/2)
    const double gain = rho.integrate([m](double v) {
        const double s = std::sinh(0.5 * v);
        return 4.0 * m * s * s;
    });
    return GrowthReport::deterministic(gain - 2.0 * epsilon, GrowthMethod::DensityQuadrature);
}

} // namespace inflation
