#include "inflation/applications.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "inflation/analytic.hpp"
#include "inflation/density.hpp"
#include "inflation/errors.hpp"

namespace inflation {

using detail::require;

Trajectory simulate_density_dependent(double epsilon, double alpha, double m, const EnvironmentPath& env,
                                      std::array<double, 2> x0, double horizon, double dt,
                                      std::size_t record_stride)
{
    require(std::isfinite(epsilon) && epsilon >= 0.0 && epsilon <= 1.0, "epsilon must lie in [0, 1]");
    require(std::isfinite(alpha) && alpha >= 0.0, "alpha must be >= 0");
    require(std::isfinite(m) && m >= 0.0, "m must be >= 0");
    require(x0[0] > 0.0 && x0[1] > 0.0, "x0 must be componentwise > 0");
    const VectorField f = [=](double, std::span<const double> x, int u, std::span<double> dx) {
        dx[0] = (u - epsilon) * x[0] - alpha * x[0] * x[0] + m * (x[1] - x[0]);
        dx[1] = (-u - epsilon) * x[1] - alpha * x[1] * x[1] + m * (x[0] - x[1]);
    };
    // Extinct runs decay into the subnormal range, so only negativity is rejected.
    Trajectory traj = integrate_rk4(f, Coords::X, {x0[0], x0[1]}, segments_of(env, horizon),
                                    {dt, Guard::NonNegative, record_stride});
    for (const Switch& s : env.switches) {
        if (s.time <= horizon) {
            traj.env_trace().push_back(s.time);
        }
    }
    return traj;
}

std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::Extinct:
        return "Extinct";
    case Verdict::Persistent:
        return "Persistent";
    case Verdict::Inconclusive:
        return "Inconclusive";
    }
    return "Inconclusive";
}

PersistenceVerdict classify_persistence(const Trajectory& traj, double threshold, double burn_in_fraction,
                                        std::size_t components)
{
    require(threshold > 0.0, "extinction threshold must be > 0");
    require(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0, "burn_in_fraction must lie in [0, 1)");
    PersistenceVerdict out;
    if (traj.empty()) {
        return out;
    }
    const std::size_t k = components == 0 ? traj.dim() : std::min(components, traj.dim());
    const double t0 = traj.times().front();
    const double t1 = traj.times().back();
    out.horizon = t1 - t0;
    const double start = t0 + burn_in_fraction * (t1 - t0);
    out.tail_min = std::numeric_limits<double>::infinity();
    out.tail_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (traj.time(i) < start) {
            continue;
        }
        const auto x = traj.state(i);
        for (std::size_t c = 0; c < k; ++c) {
            out.tail_min = std::min(out.tail_min, x[c]);
            out.tail_max = std::max(out.tail_max, std::isfinite(x[c]) ? x[c] : std::numeric_limits<double>::infinity());
        }
    }
    const auto last = traj.back();
    double final_max = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        final_max = std::max(final_max, last[c]);
    }
    if (final_max < threshold) {
        out.verdict = Verdict::Extinct;
    } else if (out.tail_min >= 10.0 * threshold && std::isfinite(out.tail_max)) {
        out.verdict = Verdict::Persistent;
    } else {
        out.verdict = Verdict::Inconclusive;
    }
    return out;
}

Verdict predict_persistence(double epsilon, double m, double T, SwitchingMode mode)
{
    double delta = 0.0;
    if (mode == SwitchingMode::Periodic) {
        delta = delta_closed(epsilon, m, T);
    } else {
        delta = m == 0.0 ? -2.0 * epsilon : delta_pdmp_quadrature(epsilon, m, T).value;
    }
    return delta > 0.0 ? Verdict::Persistent : Verdict::Extinct;
}

double occupation_above(const Trajectory& traj, double level, double burn_in_fraction)
{
    require(traj.size() >= 2, "occupation needs at least two samples");
    const double t0 = traj.times().front();
    const double start = t0 + burn_in_fraction * (traj.times().back() - t0);
    double inside = 0.0;
    double total = 0.0;
    for (std::size_t i = 1; i < traj.size(); ++i) {
        if (traj.time(i) <= start) {
            continue;
        }
        const double dt = traj.time(i) - std::max(traj.time(i - 1), start);
        const auto x = traj.state(i);
        total += dt;
        if (std::min(x[0], x[1]) >= level) {
            inside += dt;
        }
    }
    return total > 0.0 ? inside / total : 0.0;
}

void HoltParams::validate() const
{
    for (double v : {beta_n, gamma_n, mu, beta_s, gamma_s, N, i1_0, i2_0}) {
        require(std::isfinite(v) && v >= 0.0, "SIR rates and initial values must be finite and >= 0");
    }
    require(N > 0.0, "N must be > 0");
    require(std::isfinite(T) && T > 0.0, "T must be > 0");
    require(std::isfinite(phase_shift) && phase_shift >= 0.0 && phase_shift <= T, "phase_shift must lie in [0, T]");
    require(i1_0 + i2_0 > 0.0, "at least one patch needs infected individuals");
    require(i1_0 <= 1.0 && i2_0 <= 1.0, "initial infected fractions must be <= 1");
}

namespace {

// Regime code: bit 1 = patch 1 normal, bit 0 = patch 2 normal.
std::vector<Segment> holt_segments(const HoltParams& h, double horizon)
{
    std::vector<double> cuts;
    const double period = 2.0 * h.T;
    for (std::size_t k = 0;; ++k) {
        const double base = static_cast<double>(k) * h.T;
        if (base >= horizon) {
            break;
        }
        cuts.push_back(base);
        if (h.phase_shift > 0.0 && base + h.phase_shift < horizon) {
            cuts.push_back(base + h.phase_shift);
        }
    }
    cuts.push_back(horizon);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    auto normal = [&](double t) {
        const double r = std::fmod(t, period);
        return (r < 0.0 ? r + period : r) < h.T;
    };
    std::vector<Segment> segs;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        const int code = (normal(mid) ? 2 : 0) + (normal(mid - h.phase_shift) ? 1 : 0);
        segs.push_back({cuts[i], cuts[i + 1], code});
    }
    return segs;
}

} // namespace

SirRun simulate_sir(const HoltParams& holt, double m, double horizon_days, double dt, std::size_t record_stride)
{
    holt.validate();
    require(std::isfinite(m) && m >= 0.0, "m must be >= 0");
    require(std::isfinite(horizon_days) && horizon_days > 0.0, "horizon must be > 0");
    require(std::isfinite(dt) && dt > 0.0, "dt must be > 0");
    const HoltParams h = holt;
    const VectorField f = [h, m](double, std::span<const double> x, int code, std::span<double> dx) {
        const bool n1 = (code & 2) != 0;
        const bool n2 = (code & 1) != 0;
        const double b1 = (n1 ? h.beta_n : h.beta_s) / h.N;
        const double b2 = (n2 ? h.beta_n : h.beta_s) / h.N;
        const double g1 = (n1 ? h.gamma_n : h.gamma_s) + h.mu;
        const double g2 = (n2 ? h.gamma_n : h.gamma_s) + h.mu;
        const double inf1 = b1 * x[0] * x[1];
        const double inf2 = b2 * x[2] * x[3];
        dx[0] = -inf1 + m * (x[2] - x[0]);
        dx[1] = inf1 - g1 * x[1] + m * (x[3] - x[1]);
        dx[2] = -inf2 + m * (x[0] - x[2]);
        dx[3] = inf2 - g2 * x[3] + m * (x[1] - x[3]);
        dx[4] = inf1;
        dx[5] = inf2;
        dx[6] = g1 * x[1];
        dx[7] = g2 * x[3];
    };
    std::vector<double> x0{h.N * (1.0 - h.i1_0), h.N * h.i1_0, h.N * (1.0 - h.i2_0), h.N * h.i2_0, 0, 0, 0, 0};
    SirRun run;
    run.trajectory = integrate_rk4(f, Coords::SIR, x0, holt_segments(h, horizon_days),
                                   {dt, Guard::NonNegative, record_stride});
    const auto last = run.trajectory.back();
    run.cumulative_cases = last[4] + last[5];
    return run;
}

PeriodMap holt_linear_map(const HoltParams& holt, double m)
{
    holt.validate();
    require(std::isfinite(m) && m >= 0.0, "m must be >= 0");
    const double rn = holt.net_normal();
    const double rs = holt.net_distancing();
    auto gen = [m](double a, double b) { return Mat2{a - m, m, m, b - m}; };
    const double a = holt.phase_shift;
    const double b = holt.T - holt.phase_shift;
    return PeriodMap::compose({{gen(rn, rs), a}, {gen(rn, rn), b}, {gen(rs, rn), a}, {gen(rs, rs), b}});
}

double holt_linear_growth(const HoltParams& holt, double m) { return holt_linear_map(holt, m).growth_rate(); }

RescaledModel holt_rescaled(const HoltParams& holt, double time_scale)
{
    holt.validate();
    require(std::isfinite(time_scale) && time_scale > 0.0, "time_scale must be > 0");
    const double eps = 1.0 - time_scale * holt.net_normal();
    if (std::abs(time_scale * holt.net_distancing() + 1.0 + eps) > 1e-9) {
        throw InvalidArgument("normal and distancing rates are not of the form +-1 - eps after rescaling");
    }
    return {time_scale, eps, holt.T / time_scale, holt.phase_shift / holt.T};
}

std::vector<CasesRow> cumulative_cases_sweep(const HoltParams& holt, const std::vector<double>& m_grid,
                                             double horizon_days, double dt)
{
    require(!m_grid.empty(), "m grid must be nonempty");
    std::vector<CasesRow> rows;
    rows.reserve(m_grid.size());
    for (double m : m_grid) {
        // Sample sparsely: only the final state matters here.
        rows.push_back({m, simulate_sir(holt, m, horizon_days, dt, 1000000).cumulative_cases});
    }
    return rows;
}

} // namespace inflation
