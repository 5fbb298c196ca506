#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "inflation/density.hpp"
#include "inflation/model.hpp"

namespace inflation {

struct PdmpOptions {
    double burn_in_fraction = 0.05;
    std::size_t batches = 32;
    bool record_trajectory = false;  ///< keep (t, U, V, u) at every switch
    double sample_dt = 0.0;          ///< > 0: sample V on this regular grid after burn-in
    double v0 = 0.0;
    std::uint64_t stream = 0;
};

struct PdmpResult {
    Trajectory trajectory{Coords::UV, 2};
    GrowthReport report;
    std::vector<double> v_samples;
    double v_min = 0.0;  ///< extremes of V over the run
    double v_max = 0.0;
    std::size_t switches = 0;
    std::size_t cycles = 0;  ///< complete (+1, -1) cycles used by the estimate
};

/// Event-driven run of (U, V) under an arbitrary two-state signal. V follows
/// the exact flow between switches; U is integrated along it by
/// Gauss-Legendre. The estimate is the slope of U over the complete cycles
/// (each starting at a switch into +1) after burn-in; the standard error
/// comes from batch means over equal numbers of cycles.
PdmpResult simulate_switching(double epsilon, double m, const EnvironmentSignal& signal, double horizon,
                              std::uint64_t seed, const PdmpOptions& opt = {});

/// Markov switching at `rate`. Rejects horizon < 20/rate.
PdmpResult simulate_pdmp(double epsilon, double m, double rate, double horizon, std::uint64_t seed,
                         const PdmpOptions& opt = {});

/// Renewal switching with Uniform(T - eta, T + eta) sojourns (Dirac when eta = 0).
GrowthReport simulate_sape(double epsilon, double m, double T, double eta, double horizon, std::uint64_t seed,
                           const PdmpOptions& opt = {});

/// Top Lyapunov exponent from theta = x1/(x1 + x2):
/// theta' = 2 u theta (1 - theta) + m (1 - 2 theta), averaged u(2 theta - 1) - eps.
/// RK4 between switches with steps <= dt; batch-means standard error.
GrowthReport lyapunov_polar(double epsilon, double m, double rate, double horizon, std::uint64_t seed,
                            double dt = 0.02, double burn_in_fraction = 0.05, std::size_t batches = 32,
                            std::uint64_t stream = 0);

struct Histogram {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> density;  ///< normalized so that sum(density) * width = 1
    std::size_t count = 0;

    double width() const { return (hi - lo) / static_cast<double>(density.size()); }
    double center(std::size_t i) const { return lo + (static_cast<double>(i) + 0.5) * width(); }
};

/// Histogram of samples on [lo, hi] with `bins` equal cells. Samples outside are dropped.
Histogram empirical_density(const std::vector<double>& samples, std::size_t bins, double lo, double hi);

/// Histogram on (V^-, V^+) of `rho`.
Histogram empirical_density(const std::vector<double>& samples, std::size_t bins, const InvariantDensity& rho);

/// Sum over cells of |empirical cell mass - analytic cell mass|.
double l1_distance(const Histogram& h, const InvariantDensity& rho);

struct BatchMeans {
    double mean;
    double std_error;
};

/// Ratio estimator sum(num)/sum(den) with the batch-means standard error.
BatchMeans ratio_batch_means(const std::vector<double>& num, const std::vector<double>& den);

} // namespace inflation
