#include "inflation/pdmp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "inflation/errors.hpp"
#include "inflation/quadrature.hpp"
#include "inflation/switched.hpp"

namespace inflation {

using detail::require;

namespace {

void check_common(double epsilon, double m, double horizon, const PdmpOptions& opt)
{
    require(std::isfinite(epsilon) && epsilon >= 0.0 && epsilon <= 1.0, "epsilon must lie in [0, 1]");
    require(std::isfinite(m) && m >= 0.0, "m must be >= 0");
    require(std::isfinite(horizon) && horizon > 0.0, "horizon must be > 0");
    require(opt.burn_in_fraction >= 0.0 && opt.burn_in_fraction < 1.0, "burn_in_fraction must lie in [0, 1)");
    require(opt.batches >= 2, "need at least 2 batches");
    require(std::isfinite(opt.v0), "v0 must be finite");
    require(std::isfinite(opt.sample_dt) && opt.sample_dt >= 0.0, "sample_dt must be >= 0");
}

// Integral of 2m(cosh V - 1) along the exact flow from v over [0, tau].
double segment_gain(double v, int u, double m, double tau)
{
    if (m == 0.0 || tau <= 0.0) {
        return 0.0;
    }
    const auto& rule = gauss_legendre(16);
    const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil(tau)));
    return integrate_gl(
        [&](double s) {
            const double w = flow_exact(v, u, m, s);
            const double sh = std::sinh(0.5 * w);
            return 4.0 * m * sh * sh;
        },
        0.0, tau, panels, rule);
}

} // namespace

BatchMeans ratio_batch_means(const std::vector<double>& num, const std::vector<double>& den)
{
    require(num.size() == den.size(), "batch vectors differ in length");
    require(num.size() >= 2, "need at least 2 batches");
    double sn = 0.0;
    double sd = 0.0;
    for (std::size_t i = 0; i < num.size(); ++i) {
        sn += num[i];
        sd += den[i];
    }
    require(sd > 0.0, "batch denominators must be positive");
    const double r = sn / sd;
    const double b = static_cast<double>(num.size());
    double ss = 0.0;
    for (std::size_t i = 0; i < num.size(); ++i) {
        const double e = num[i] - r * den[i];
        ss += e * e;
    }
    return {r, std::sqrt(ss / (b * (b - 1.0))) / (sd / b)};
}

PdmpResult simulate_switching(double epsilon, double m, const EnvironmentSignal& signal, double horizon,
                              std::uint64_t seed, const PdmpOptions& opt)
{
    check_common(epsilon, m, horizon, opt);
    EnvironmentSampler sampler(signal, seed, opt.stream);
    PdmpResult res;
    const double burn = opt.burn_in_fraction * horizon;

    double t = 0.0;
    double v = opt.v0;
    double gain = 0.0;  // integral of 2m(cosh V - 1); U = U0 + gain - 2 eps t
    int u = sampler.state();
    res.v_min = res.v_max = v;
    std::vector<double> mark_t;
    std::vector<double> mark_gain;
    if (u > 0 && burn == 0.0) {
        mark_t.push_back(0.0);
        mark_gain.push_back(0.0);
    }
    const double u0 = 0.0;
    auto u_of = [&](double time, double g) { return u0 + g - 2.0 * epsilon * time; };
    if (opt.record_trajectory) {
        const double s[2] = {u_of(0.0, 0.0), v};
        res.trajectory.push(0.0, s, u);
    }
    std::size_t next_sample = 0;

    while (t < horizon) {
        const double t_sw = sampler.next_switch();
        const double t_next = std::min(t_sw, horizon);
        const double tau = t_next - t;
        if (opt.sample_dt > 0.0) {
            for (;;) {
                const double ts = burn + static_cast<double>(next_sample) * opt.sample_dt;
                if (ts >= t_next || ts > horizon) {
                    break;
                }
                if (ts >= t) {
                    res.v_samples.push_back(flow_exact(v, u, m, ts - t));
                }
                ++next_sample;
            }
        }
        gain += segment_gain(v, u, m, tau);
        v = flow_exact(v, u, m, tau);
        res.v_min = std::min(res.v_min, v);
        res.v_max = std::max(res.v_max, v);
        t = t_next;
        if (t_sw <= horizon) {
            u = sampler.advance().state;
            ++res.switches;
            if (opt.record_trajectory) {
                const double s[2] = {u_of(t, gain), v};
                res.trajectory.push(t, s, u);
                res.trajectory.env_trace().push_back(t);
            }
            if (u > 0 && t >= burn) {
                mark_t.push_back(t);
                mark_gain.push_back(gain);
            }
        }
    }
    if (opt.record_trajectory && res.trajectory.times().back() < horizon) {
        const double s[2] = {u_of(horizon, gain), v};
        res.trajectory.push(horizon, s, u);
    }

    const std::size_t k = mark_t.empty() ? 0 : mark_t.size() - 1;
    if (k < 2) {
        throw NumericalFailure("too few complete switching cycles after burn-in; increase the horizon");
    }
    const std::size_t b = std::min(opt.batches, k);
    const std::size_t per = k / b;
    std::vector<double> num(b);
    std::vector<double> den(b);
    for (std::size_t i = 0; i < b; ++i) {
        const std::size_t i0 = i * per;
        const std::size_t i1 = i0 + per;
        den[i] = mark_t[i1] - mark_t[i0];
        num[i] = (mark_gain[i1] - mark_gain[i0]) - 2.0 * epsilon * den[i];
    }
    const BatchMeans bm = ratio_batch_means(num, den);
    res.cycles = b * per;
    res.report = GrowthReport::monte_carlo(bm.mean, bm.std_error, horizon, res.cycles, seed);
    return res;
}

PdmpResult simulate_pdmp(double epsilon, double m, double rate, double horizon, std::uint64_t seed,
                         const PdmpOptions& opt)
{
    require(std::isfinite(rate) && rate > 0.0, "switching rate must be > 0");
    require(std::isfinite(horizon) && horizon >= 20.0 / rate, "horizon must be at least 20/rate");
    return simulate_switching(epsilon, m, EnvironmentSignal::markov(rate), horizon, seed, opt);
}

GrowthReport simulate_sape(double epsilon, double m, double T, double eta, double horizon, std::uint64_t seed,
                           const PdmpOptions& opt)
{
    require(std::isfinite(T) && T > 0.0, "T must be > 0");
    require(std::isfinite(eta) && eta >= 0.0 && eta < T, "SAPE needs 0 <= eta < T");
    require(std::isfinite(horizon) && horizon >= 20.0 * T, "horizon must be at least 20 T");
    const SojournDistribution law = eta == 0.0 ? SojournDistribution::dirac(T) : SojournDistribution::uniform(T, eta);
    return simulate_switching(epsilon, m, EnvironmentSignal::renewal(law, law), horizon, seed, opt).report;
}

GrowthReport lyapunov_polar(double epsilon, double m, double rate, double horizon, std::uint64_t seed, double dt,
                            double burn_in_fraction, std::size_t batches, std::uint64_t stream)
{
    require(std::isfinite(epsilon) && epsilon >= 0.0 && epsilon <= 1.0, "epsilon must lie in [0, 1]");
    require(std::isfinite(m) && m >= 0.0, "m must be >= 0");
    require(std::isfinite(rate) && rate > 0.0, "switching rate must be > 0");
    require(std::isfinite(horizon) && horizon >= 20.0 / rate, "horizon must be at least 20/rate");
    require(std::isfinite(dt) && dt > 0.0, "dt must be > 0");
    require(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0, "burn_in_fraction must lie in [0, 1)");
    require(batches >= 2, "need at least 2 batches");

    EnvironmentSampler sampler(EnvironmentSignal::markov(rate), seed, stream);
    const double burn = burn_in_fraction * horizon;
    const double len = (horizon - burn) / static_cast<double>(batches);
    auto boundary = [&](std::size_t j) { return j == batches ? horizon : burn + static_cast<double>(j) * len; };

    auto field = [m](int u, double th) { return 2.0 * u * th * (1.0 - th) + m * (1.0 - 2.0 * th); };
    double theta = 0.5;
    double t = 0.0;
    int u = sampler.state();
    std::size_t batch = 0;        // index of the next boundary not yet passed
    bool started = burn == 0.0;   // inside the averaging window
    double acc = 0.0;
    std::vector<double> means;
    means.reserve(batches);
    std::uint64_t steps = 0;

    while (t < horizon) {
        const double t_sw = sampler.next_switch();
        const double t_bd = started ? boundary(batch + 1) : burn;
        const double t_next = std::min({t_sw, t_bd, horizon});
        const double span = t_next - t;
        if (span > 0.0) {
            const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(span / dt - 1e-9)));
            const double h = span / static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i) {
                // RK4 on (theta, integral of u(2 theta - 1)).
                const double k1 = field(u, theta);
                const double th2 = theta + 0.5 * h * k1;
                const double k2 = field(u, th2);
                const double th3 = theta + 0.5 * h * k2;
                const double k3 = field(u, th3);
                const double th4 = theta + h * k3;
                const double k4 = field(u, th4);
                const double q = u * ((2.0 * theta - 1.0) + 2.0 * (2.0 * th2 - 1.0) + 2.0 * (2.0 * th3 - 1.0) +
                                      (2.0 * th4 - 1.0)) / 6.0;
                theta += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                if (started) {
                    acc += h * q;
                }
            }
            steps += n;
            if (!(theta >= -1e-9 && theta <= 1.0 + 1e-9)) {
                std::ostringstream msg;
                msg << "lyapunov_polar: theta left [0, 1] (theta = " << theta << " at t = " << t_next << ")";
                throw NumericalFailure(msg.str());
            }
        }
        t = t_next;
        if (!started && t >= burn) {
            started = true;
        } else if (started && t >= t_bd) {
            means.push_back(acc / len - epsilon);
            acc = 0.0;
            ++batch;
            if (batch == batches) {
                break;
            }
        }
        if (t_sw <= t) {
            u = sampler.advance().state;
        }
    }
    if (means.size() != batches) {
        throw NumericalFailure("lyapunov_polar: incomplete batches");
    }
    double mean = 0.0;
    for (double x : means) mean += x;
    mean /= static_cast<double>(batches);
    double ss = 0.0;
    for (double x : means) ss += (x - mean) * (x - mean);
    const double se = std::sqrt(ss / (static_cast<double>(batches) * (static_cast<double>(batches) - 1.0)));
    return GrowthReport::monte_carlo(mean, se, horizon, static_cast<std::size_t>(steps), seed);
}

Histogram empirical_density(const std::vector<double>& samples, std::size_t bins, double lo, double hi)
{
    require(bins >= 1, "histogram needs at least one bin");
    require(std::isfinite(lo) && std::isfinite(hi) && hi > lo, "histogram range must satisfy lo < hi");
    Histogram h;
    h.lo = lo;
    h.hi = hi;
    h.density.assign(bins, 0.0);
    const double w = (hi - lo) / static_cast<double>(bins);
    for (double x : samples) {
        if (x < lo || x > hi) {
            continue;
        }
        auto i = static_cast<std::size_t>((x - lo) / w);
        i = std::min(i, bins - 1);
        h.density[i] += 1.0;
        ++h.count;
    }
    if (h.count > 0) {
        for (double& d : h.density) d /= static_cast<double>(h.count) * w;
    }
    return h;
}

Histogram empirical_density(const std::vector<double>& samples, std::size_t bins, const InvariantDensity& rho)
{
    return empirical_density(samples, bins, -rho.v_plus(), rho.v_plus());
}

double l1_distance(const Histogram& h, const InvariantDensity& rho)
{
    double d = 0.0;
    const double w = h.width();
    for (std::size_t i = 0; i < h.density.size(); ++i) {
        const double a = h.lo + static_cast<double>(i) * w;
        d += std::abs(h.density[i] * w - rho.mass(a, a + w));
    }
    return d;
}

} // namespace inflation
