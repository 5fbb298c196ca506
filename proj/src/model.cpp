#include "inflation/model.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "inflation/errors.hpp"

namespace inflation {

using detail::require;

namespace {

bool finite(double x) { return std::isfinite(x); }

} // namespace

void ModelParams::validate() const
{
    require(finite(epsilon) && epsilon >= 0.0 && epsilon <= 1.0, "epsilon must lie in [0, 1]");
    require(finite(m) && m >= 0.0, "dispersal rate m must be >= 0");
    require(finite(T) && T > 0.0, "half-period T must be > 0");
    require(finite(alpha) && alpha >= 0.0, "alpha must be >= 0");
    require(finite(beta_disp) && beta_disp > 0.0 && beta_disp <= 0.5, "beta_disp must lie in (0, 0.5]");
    require(finite(phi) && phi >= 0.0 && phi <= 1.0, "phi must lie in [0, 1]");
    if (rates) {
        require(finite(rates->r1) && finite(rates->d1) && finite(rates->r2) && finite(rates->d2),
                "rates must be finite");
    }
}

SquareRates ModelParams::effective_rates() const
{
    if (rates) {
        return *rates;
    }
    return {1.0 - epsilon, 1.0 + epsilon, 1.0 - epsilon, 1.0 + epsilon};
}

void SojournDistribution::validate() const
{
    require(finite(mean) && mean > 0.0, "sojourn mean must be > 0");
    if (kind == SojournKind::Uniform) {
        require(finite(half_width) && half_width >= 0.0 && half_width < mean,
                "uniform sojourn requires 0 <= eta < T");
    }
}

double SojournDistribution::sample(CounterRng& rng) const
{
    switch (kind) {
    case SojournKind::Dirac:
        return mean;
    case SojournKind::Exponential:
        return -mean * std::log(rng.uniform_open_low());
    case SojournKind::Uniform:
        return (mean - half_width) + 2.0 * half_width * rng.uniform_open_low();
    }
    return mean;
}

EnvironmentSignal EnvironmentSignal::periodic(double T, double phase_origin, int u0)
{
    EnvironmentSignal s;
    s.kind = SignalKind::PeriodicSquare;
    s.half_period = T;
    s.phase_origin = phase_origin;
    s.initial_state = u0;
    return s;
}

EnvironmentSignal EnvironmentSignal::markov(double rate, int u0)
{
    EnvironmentSignal s;
    s.kind = SignalKind::MarkovSwitch;
    s.rate = rate;
    s.initial_state = u0;
    return s;
}

EnvironmentSignal EnvironmentSignal::renewal(SojournDistribution minus, SojournDistribution plus, int u0)
{
    EnvironmentSignal s;
    s.kind = SignalKind::RenewalSwitch;
    s.sojourn_minus = minus;
    s.sojourn_plus = plus;
    s.initial_state = u0;
    return s;
}

void EnvironmentSignal::validate() const
{
    require(initial_state == 1 || initial_state == -1, "initial_state must be +1 or -1");
    switch (kind) {
    case SignalKind::PeriodicSquare:
        require(finite(half_period) && half_period > 0.0, "periodic signal needs T > 0");
        require(finite(phase_origin) && phase_origin >= 0.0 && phase_origin < half_period,
                "phase_origin must lie in [0, T)");
        break;
    case SignalKind::MarkovSwitch:
        require(finite(rate) && rate > 0.0, "switching rate must be > 0");
        break;
    case SignalKind::RenewalSwitch:
        sojourn_minus.validate();
        sojourn_plus.validate();
        break;
    }
}

EnvironmentSampler::EnvironmentSampler(const EnvironmentSignal& signal, std::uint64_t seed, std::uint64_t stream)
    : signal_(signal), rng_(seed, stream), state_(signal.initial_state)
{
    signal_.validate();
    schedule_next();
}

double EnvironmentSampler::draw_sojourn(int state)
{
    switch (signal_.kind) {
    case SignalKind::PeriodicSquare:
        return signal_.half_period;
    case SignalKind::MarkovSwitch:
        return -std::log(rng_.uniform_open_low()) / signal_.rate;
    case SignalKind::RenewalSwitch:
        return (state > 0 ? signal_.sojourn_plus : signal_.sojourn_minus).sample(rng_);
    }
    return signal_.half_period;
}

void EnvironmentSampler::schedule_next()
{
    if (signal_.kind == SignalKind::PeriodicSquare) {
        next_ = static_cast<double>(switches_ + 1) * signal_.half_period - signal_.phase_origin;
        return;
    }
    const SojournDistribution& law = state_ > 0 ? signal_.sojourn_plus : signal_.sojourn_minus;
    const bool dirac = signal_.kind == SignalKind::RenewalSwitch && law.kind == SojournKind::Dirac;
    if (dirac && law.mean == run_length_) {
        ++run_count_;
        next_ = anchor_ + static_cast<double>(run_count_) * run_length_;
        return;
    }
    const double start = next_;
    const double sojourn = draw_sojourn(state_);
    if (dirac) {
        anchor_ = start;
        run_length_ = sojourn;
        run_count_ = 1;
    } else {
        run_length_ = -1.0;
        run_count_ = 0;
    }
    next_ = start + sojourn;
}

Switch EnvironmentSampler::advance()
{
    const Switch s{next_, -state_};
    state_ = -state_;
    ++switches_;
    schedule_next();
    return s;
}

std::vector<Switch> realize_environment(const EnvironmentSignal& signal, double horizon, std::uint64_t seed)
{
    require(std::isfinite(horizon) && horizon > 0.0, "horizon must be > 0");
    EnvironmentSampler sampler(signal, seed);
    std::vector<Switch> out;
    while (sampler.next_switch() <= horizon) {
        out.push_back(sampler.advance());
    }
    return out;
}

EnvironmentPath EnvironmentPath::realize(const EnvironmentSignal& signal, double horizon, std::uint64_t seed)
{
    return {signal.initial_state, realize_environment(signal, horizon, seed)};
}

int EnvironmentPath::state_at(double t) const
{
    int u = initial_state;
    // Switches are sorted; binary search for the last one at or before t.
    std::size_t lo = 0;
    std::size_t hi = switches.size();
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (switches[mid].time <= t) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    if (lo > 0) {
        u = switches[lo - 1].state;
    }
    return u;
}

Trajectory::Trajectory(Coords coords, std::size_t dim) : coords_(coords), dim_(dim) {}

std::span<const double> Trajectory::state(std::size_t i) const
{
    if (i >= times_.size()) {
        throw std::out_of_range("trajectory index out of range");
    }
    return {values_.data() + i * dim_, dim_};
}

void Trajectory::push(double t, std::span<const double> x, int u)
{
    if (x.size() != dim_) {
        throw InvalidArgument("state dimension mismatch");
    }
    if (!times_.empty() && !(t > times_.back())) {
        throw NumericalFailure("trajectory times must be strictly increasing");
    }
    times_.push_back(t);
    values_.insert(values_.end(), x.begin(), x.end());
    env_states_.push_back(u);
}

std::vector<double> Trajectory::component(std::size_t k) const
{
    std::vector<double> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) {
        out.push_back(values_[i * dim_ + k]);
    }
    return out;
}

void Trajectory::write_csv(std::ostream& out) const
{
    switch (coords_) {
    case Coords::X:
        out << "t,x1,x2\n";
        break;
    case Coords::UV:
        out << "t,U,V,u\n";
        break;
    case Coords::SIR:
        out << "t,S1,I1,S2,I2,C1,C2,R1,R2,cases\n";
        break;
    }
    const std::size_t columns = coords_ == Coords::SIR ? dim_ : 2;
    std::ostringstream line;
    line.precision(17);
    for (std::size_t i = 0; i < size(); ++i) {
        line.str({});
        line << times_[i];
        for (std::size_t k = 0; k < columns; ++k) {
            line << ',' << values_[i * dim_ + k];
        }
        if (coords_ == Coords::UV) {
            line << ',' << env_states_[i];
        } else if (coords_ == Coords::SIR) {
            line << ',' << values_[i * dim_ + 4] + values_[i * dim_ + 5];
        }
        out << line.str() << '\n';
    }
}

void Trajectory::convert_to_uv(double v_shift)
{
    if (coords_ == Coords::UV) {
        return;
    }
    if (coords_ != Coords::X || dim_ != 2) {
        throw InvalidArgument("only X trajectories convert to (U, V)");
    }
    for (std::size_t i = 0; i < size(); ++i) {
        const double l1 = std::log(values_[2 * i]);
        const double l2 = std::log(values_[2 * i + 1]);
        values_[2 * i] = l1 + l2;
        values_[2 * i + 1] = l1 - l2 - v_shift;
    }
    coords_ = Coords::UV;
}

std::string_view to_string(GrowthMethod method)
{
    switch (method) {
    case GrowthMethod::ClosedForm:
        return "ClosedForm";
    case GrowthMethod::Spectral:
        return "Spectral";
    case GrowthMethod::OrbitQuadrature:
        return "OrbitQuadrature";
    case GrowthMethod::DensityQuadrature:
        return "DensityQuadrature";
    case GrowthMethod::MonteCarlo:
        return "MonteCarlo";
    }
    return "ClosedForm";
}

GrowthMethod growth_method_from_string(std::string_view name)
{
    for (auto m : {GrowthMethod::ClosedForm, GrowthMethod::Spectral, GrowthMethod::OrbitQuadrature,
                   GrowthMethod::DensityQuadrature, GrowthMethod::MonteCarlo}) {
        if (to_string(m) == name) {
            return m;
        }
    }
    throw InvalidArgument("unknown growth method: " + std::string(name));
}

GrowthReport GrowthReport::deterministic(double value, GrowthMethod method, std::size_t samples)
{
    if (method == GrowthMethod::MonteCarlo) {
        throw InvalidArgument("Monte Carlo reports need a standard error");
    }
    GrowthReport r;
    r.value = value;
    r.method = method;
    r.samples = samples;
    return r;
}

GrowthReport GrowthReport::monte_carlo(double value, double std_error, double horizon, std::size_t samples,
                                       std::uint64_t seed)
{
    GrowthReport r;
    r.value = value;
    r.method = GrowthMethod::MonteCarlo;
    r.std_error = std_error;
    r.horizon = horizon;
    r.samples = samples;
    r.seed = seed;
    r.validate();
    return r;
}

void GrowthReport::validate() const
{
    const bool mc = method == GrowthMethod::MonteCarlo;
    require(mc == std_error.has_value(), "std_error must be present exactly for Monte Carlo reports");
    if (std_error) {
        require(*std_error >= 0.0, "std_error must be >= 0");
    }
}

} // namespace inflation
