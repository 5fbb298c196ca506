#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "inflation/model.hpp"

namespace inflation {

/// Exact solution of dV/dt = 2(u - m sinh V) after time t >= 0.
double flow_exact(double v0, int sign, double m, double t);

/// Exact U increment along the same flow: the integral of 2(m cosh V - m - eps)
/// from v0 to v1 = flow_exact(v0, sign, m, tau). Loses accuracy near the equilibrium.
double flow_u_increment(double v0, double v1, int sign, double m, double epsilon, double tau);

struct PeriodicOrbit {
    double p_minus;  ///< V at the switch into +1, the cycle start
    double p_plus;   ///< V at the switch into -1
    double v_e;      ///< fixed point of the period map, equal to p_minus
    std::size_t iterations;
};

/// Attracting periodic V-orbit of the (+-1) model with half-period T.
PeriodicOrbit periodic_orbit(double m, double T);

/// Slope of U by Gauss-Legendre quadrature of 2(m cosh V - m - eps) along
/// the periodic orbit: ceil(T) panels of n_nodes points over one half-period.
GrowthReport delta_quadrature(double epsilon, double m, double T, std::size_t n_nodes = 64);

/// Time interval with a constant environment state.
struct Segment {
    double t0;
    double t1;
    int u;
};

/// Splits [0, horizon] at the switches of `env`.
std::vector<Segment> segments_of(const EnvironmentPath& env, double horizon);

using VectorField = std::function<void(double t, std::span<const double> x, int u, std::span<double> dx)>;

enum class Guard { None, Positive, NonNegative };

struct Rk4Options {
    double dt = 0.0;
    Guard guard = Guard::None;
    std::size_t record_stride = 1;  ///< keep every n-th step (segment ends always kept)
};

/// Classical RK4 with steps aligned to segment boundaries. When the guard
/// is violated a step is retried with 2, 4, ..., 64 substeps, then
/// StepSizeCollapse is thrown.
Trajectory integrate_rk4(const VectorField& f, Coords coords, std::vector<double> x0,
                         const std::vector<Segment>& segments, const Rk4Options& opt);

/// Growth rates (a1, a2) of the two patches.
struct PatchRates {
    double a1;
    double a2;
};

using RateFunction = std::function<PatchRates(double t, int u)>;

/// Patch rates implied by params in environment u: the (+-1) case or the
/// square-wave rates when present.
PatchRates square_rates(const ModelParams& p, int u);

/// Shift c with V = ln(x1/x2) - c: c = ln(beta/(1 - beta))/2.
double asymmetric_v_shift(double beta);

/// (dU/dt, dV/dt) at V from the (U, V) form of the two-patch system with
/// dispersal asymmetry beta.
std::array<double, 2> uv_field(PatchRates r, double m, double beta, double v);

/// Two-patch linear system x1' = a1 x1 + m(2b x2 - 2(1-b) x1), symmetric for x2.
/// dt <= 0 selects T/200. X trajectories above 1e150 continue in (U, V)
/// with a note.
Trajectory integrate_switched(const ModelParams& params, const EnvironmentPath& env, std::array<double, 2> x0,
                              double horizon, double dt = 0.0, Coords coords = Coords::X);

/// As integrate_switched with continuous rates r(t, u).
Trajectory integrate_rates(const RateFunction& rates, double m, double beta, const EnvironmentPath& env,
                           std::array<double, 2> x0, double horizon, double dt, Coords coords = Coords::X,
                           std::size_t record_stride = 1);

struct AsymmetricRun {
    Trajectory trajectory;   ///< X coordinates
    double max_residual;     ///< largest |UV identity - X field| over the samples
};

/// X integration with dispersal asymmetry plus a check of the (U, V) form
/// against the sampled states. Throws NumericalFailure if the residual
/// exceeds 1e-6.
AsymmetricRun integrate_asymmetric(const ModelParams& params, const EnvironmentPath& env, std::array<double, 2> x0,
                                   double horizon, double dt = 0.0);

/// Infinite-dispersal limit: the total population grows at the rate of the
/// dispersal-weighted mean, split as (beta, 1 - beta).
std::array<double, 2> perfect_mixing_reference(const ModelParams& params, const EnvironmentPath& env,
                                               std::array<double, 2> x0, double t);

} // namespace inflation
