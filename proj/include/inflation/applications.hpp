#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "inflation/matrix.hpp"
#include "inflation/model.hpp"
#include "inflation/switched.hpp"

namespace inflation {

// ---- density-dependent two-patch model -------------------------------------

/// x1' = (u - eps) x1 - alpha x1^2 + m (x2 - x1), x2' = (-u - eps) x2 - alpha x2^2 + m (x1 - x2).
Trajectory simulate_density_dependent(double epsilon, double alpha, double m, const EnvironmentPath& env,
                                      std::array<double, 2> x0, double horizon, double dt,
                                      std::size_t record_stride = 1);

enum class Verdict { Extinct, Persistent, Inconclusive };

std::string_view to_string(Verdict v);

struct PersistenceVerdict {
    Verdict verdict = Verdict::Inconclusive;
    double tail_min = 0.0;  ///< smallest component over the final window
    double tail_max = 0.0;  ///< largest component over the final window
    double horizon = 0.0;
};

/// Extinct if every component ends below `threshold`; Persistent if every
/// component stays >= 10 * threshold and finite after `burn_in_fraction` of
/// the run; Inconclusive otherwise. Only the first `components` entries of
/// each state are inspected (0 = all).
PersistenceVerdict classify_persistence(const Trajectory& traj, double threshold = 1e-8,
                                        double burn_in_fraction = 0.5, std::size_t components = 0);

enum class SwitchingMode { Periodic, Markov };

/// Verdict implied by the sign of the growth exponent of the linearized
/// system; a zero exponent counts as extinction.
Verdict predict_persistence(double epsilon, double m, double T, SwitchingMode mode);

/// Fraction of time after burn-in during which min(x1, x2) >= level.
double occupation_above(const Trajectory& traj, double level, double burn_in_fraction = 0.5);

// ---- two-patch SIR epidemic -------------------------------------------------

/// Per-day rates of the SIR model with square-wave social distancing.
/// `beta_n` and `beta_s` are the products beta * N.
struct HoltParams {
    double beta_n = 0.1988;
    double gamma_n = 0.098;
    double mu = 0.002;
    double beta_s = 0.0288;
    double gamma_s = 0.128;
    double T = 30.0;            ///< days in each phase
    double phase_shift = 4.0;   ///< days by which patch 2 lags patch 1
    double N = 1.0;
    double i1_0 = 1e-5;         ///< initial infected in patch 1, fraction of N
    double i2_0 = 0.0;

    void validate() const;
    double net_normal() const { return beta_n - (gamma_n + mu); }
    double net_distancing() const { return beta_s - (gamma_s + mu); }
};

struct SirRun {
    /// States S1, I1, S2, I2, C1, C2, R1, R2; C = cumulative cases, R = removals.
    Trajectory trajectory{Coords::SIR, 8};
    double cumulative_cases = 0.0;  ///< C1 + C2 at the horizon
};

/// Patch 1 is in normal conditions on [2kT, (2k+1)T), patch 2 the same
/// schedule delayed by phase_shift.
SirRun simulate_sir(const HoltParams& holt, double m, double horizon_days, double dt = 0.1,
                    std::size_t record_stride = 1);

/// Period map of the linearized infected dynamics over 2T days.
PeriodMap holt_linear_map(const HoltParams& holt, double m);

/// Growth rate per day of the linearized model.
double holt_linear_growth(const HoltParams& holt, double m);

/// The (+-1) model the linearization reduces to after rescaling time by
/// `time_scale`: rates +-1 - eps, half-period T/time_scale, shift fraction phi.
struct RescaledModel {
    double time_scale;
    double epsilon;
    double T;
    double phi;
};

/// Only valid when the normal and distancing rates are symmetric about -eps/time_scale.
RescaledModel holt_rescaled(const HoltParams& holt, double time_scale = 10.0);

struct CasesRow {
    double m;
    double cumulative_cases;
};

std::vector<CasesRow> cumulative_cases_sweep(const HoltParams& holt, const std::vector<double>& m_grid,
                                             double horizon_days = 1500.0, double dt = 0.1);

} // namespace inflation
