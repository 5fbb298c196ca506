#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "inflation/rng.hpp"

namespace inflation {

/// Per-patch square-wave rates. Patch 1 grows at r1 then declines at d1,
/// patch 2 declines at d2 then grows at r2, each phase lasting T.
struct SquareRates {
    double r1 = 0.0;
    double d1 = 0.0;
    double r2 = 0.0;
    double d2 = 0.0;

    bool operator==(const SquareRates&) const = default;
};

/// Scalar parameters shared by every computation.
///
/// epsilon is the mortality offset, m the dispersal rate and T the
/// half-period (periodic case) or mean sojourn time (random case).
/// The remaining fields switch on the model extensions; their defaults
/// reproduce the plain two-patch (+1/-1) model.
struct ModelParams {
    double epsilon = 0.0;
    double m = 0.0;
    double T = 1.0;
    double alpha = 0.0;      ///< density dependence
    double beta_disp = 0.5;  ///< dispersal asymmetry, 0.5 is symmetric
    double phi = 1.0;        ///< phase-shift fraction, 1 is fully out of phase
    std::optional<SquareRates> rates;

    void validate() const;

    /// Rates actually in force: `rates` if set, else (1-eps, 1+eps, 1-eps, 1+eps).
    SquareRates effective_rates() const;

    bool operator==(const ModelParams&) const = default;
};

enum class SojournKind { Dirac, Exponential, Uniform };

/// Law of the time spent in one environment state.
struct SojournDistribution {
    SojournKind kind = SojournKind::Dirac;
    double mean = 1.0;       ///< T: the point mass, the exponential mean, or the uniform centre
    double half_width = 0.0; ///< eta, Uniform only

    static SojournDistribution dirac(double T) { return {SojournKind::Dirac, T, 0.0}; }
    static SojournDistribution exponential(double mean) { return {SojournKind::Exponential, mean, 0.0}; }
    static SojournDistribution uniform(double T, double eta) { return {SojournKind::Uniform, T, eta}; }

    void validate() const;
    double sample(CounterRng& rng) const;

    bool operator==(const SojournDistribution&) const = default;
};

enum class SignalKind { PeriodicSquare, MarkovSwitch, RenewalSwitch };

/// Description of the switching process t -> u(t) in {-1, +1}.
struct EnvironmentSignal {
    SignalKind kind = SignalKind::PeriodicSquare;
    double half_period = 1.0;   ///< PeriodicSquare
    double phase_origin = 0.0;  ///< PeriodicSquare: time already spent in the first state at t = 0
    double rate = 1.0;          ///< MarkovSwitch: sigma = 1/T
    SojournDistribution sojourn_minus;  ///< RenewalSwitch
    SojournDistribution sojourn_plus;   ///< RenewalSwitch
    int initial_state = +1;

    static EnvironmentSignal periodic(double T, double phase_origin = 0.0, int u0 = +1);
    static EnvironmentSignal markov(double rate, int u0 = +1);
    static EnvironmentSignal renewal(SojournDistribution minus, SojournDistribution plus, int u0 = +1);

    void validate() const;

    bool operator==(const EnvironmentSignal&) const = default;
};

struct Switch {
    double time;
    int state;  ///< state entered at `time`

    bool operator==(const Switch&) const = default;
};

/// Streams the switch times of one realization in increasing order.
class EnvironmentSampler {
public:
    EnvironmentSampler(const EnvironmentSignal& signal, std::uint64_t seed, std::uint64_t stream = 0);

    int state() const noexcept { return state_; }
    double next_switch() const noexcept { return next_; }

    /// Performs the pending switch and draws the one after it.
    Switch advance();

private:
    double draw_sojourn(int state);
    void schedule_next();

    EnvironmentSignal signal_;
    CounterRng rng_;
    int state_;
    double next_ = 0.0;
    std::uint64_t switches_ = 0;
    // Runs of equal Dirac sojourns are placed by multiplication from an anchor.
    double anchor_ = 0.0;
    double run_length_ = -1.0;
    std::uint64_t run_count_ = 0;
};

/// All switches in (0, horizon], deterministic in (signal, seed).
std::vector<Switch> realize_environment(const EnvironmentSignal& signal, double horizon, std::uint64_t seed);

/// A realized environment: initial state plus its switches.
struct EnvironmentPath {
    int initial_state = +1;
    std::vector<Switch> switches;

    static EnvironmentPath realize(const EnvironmentSignal& signal, double horizon, std::uint64_t seed);

    /// u(t) with right-continuous convention at switch times.
    int state_at(double t) const;
};

enum class Coords { X, UV, SIR };

/// Sampled time series of a system state.
class Trajectory {
public:
    Trajectory() = default;
    Trajectory(Coords coords, std::size_t dim);

    Coords coords() const noexcept { return coords_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return times_.size(); }
    bool empty() const noexcept { return times_.empty(); }

    const std::vector<double>& times() const noexcept { return times_; }
    std::span<const double> state(std::size_t i) const;
    int env_state(std::size_t i) const { return env_states_.at(i); }
    double time(std::size_t i) const { return times_.at(i); }
    std::span<const double> back() const { return state(size() - 1); }

    /// Appends a sample; times must be strictly increasing.
    void push(double t, std::span<const double> x, int u);

    std::vector<double>& env_trace() noexcept { return env_trace_; }
    const std::vector<double>& env_trace() const noexcept { return env_trace_; }

    std::vector<std::string>& notes() noexcept { return notes_; }
    const std::vector<std::string>& notes() const noexcept { return notes_; }

    /// Component `k` of every sample.
    std::vector<double> component(std::size_t k) const;

    /// CSV with header `t,x1,x2`, `t,U,V,u` or `t,S1,I1,S2,I2,C1,C2,R1,R2,cases`.
    void write_csv(std::ostream& out) const;

    /// Converts an X trajectory to (U, V) in place; V = ln(x1/x2) - v_shift.
    void convert_to_uv(double v_shift = 0.0);

private:
    Coords coords_ = Coords::X;
    std::size_t dim_ = 2;
    std::vector<double> times_;
    std::vector<double> values_;
    std::vector<int> env_states_;
    std::vector<double> env_trace_;
    std::vector<std::string> notes_;
};

enum class GrowthMethod { ClosedForm, Spectral, OrbitQuadrature, DensityQuadrature, MonteCarlo };

std::string_view to_string(GrowthMethod method);
GrowthMethod growth_method_from_string(std::string_view name);

/// A growth exponent with its provenance. `std_error` is present exactly
/// when the method is MonteCarlo.
struct GrowthReport {
    double value = 0.0;
    GrowthMethod method = GrowthMethod::ClosedForm;
    std::optional<double> std_error;
    double horizon = 0.0;
    std::size_t samples = 0;
    std::optional<std::uint64_t> seed;

    static GrowthReport deterministic(double value, GrowthMethod method, std::size_t samples = 0);
    static GrowthReport monte_carlo(double value, double std_error, double horizon, std::size_t samples,
                                    std::uint64_t seed);

    void validate() const;
};

} // namespace inflation
