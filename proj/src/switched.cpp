#include "inflation/switched.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "inflation/analytic.hpp"
#include "inflation/errors.hpp"
#include "inflation/quadrature.hpp"

namespace inflation {

using detail::require;

double flow_exact(double v0, int sign, double m, double t)
{
    require(sign == 1 || sign == -1, "sign must be +1 or -1");
    require(std::isfinite(m) && m >= 0.0, "m must be >= 0");
    require(std::isfinite(t) && t >= 0.0, "t must be >= 0");
    require(std::isfinite(v0), "v0 must be finite");
    if (sign < 0) {
        return -flow_exact(-v0, 1, m, t);
    }
    if (t == 0.0) {
        return v0;
    }
    // y = tanh(V/2) solves y' = A^2 - (y + m)^2; e^V = (1 + y)/(1 - y).
    const double A = std::hypot(1.0, m);
    const double p0 = 2.0 / (1.0 + std::exp(-v0));  // 1 + y0
    const double n0 = 2.0 / (1.0 + std::exp(v0));   // 1 - y0
    const double k = std::tanh(A * t);
    const double omk = 2.0 / (1.0 + std::exp(2.0 * A * t));  // 1 - k
    const double num = p0 + k * ((1.0 - m) * p0 + 2.0 * m) / A;
    const double den = n0 * (omk * (1.0 + m) - 2.0 * m / (A + 1.0 + m)) / A + 2.0 * m * k / A;
    return std::log(num) - std::log(den);
}

double flow_u_increment(double v0, double v1, int sign, double m, double epsilon, double tau)
{
    const double s = static_cast<double>(sign);
    return std::log((1.0 - s * m * std::sinh(v0)) / (1.0 - s * m * std::sinh(v1))) - 2.0 * (m + epsilon) * tau;
}

PeriodicOrbit periodic_orbit(double m, double T)
{
    require(std::isfinite(m) && m > 0.0, "periodic_orbit needs m > 0");
    require(std::isfinite(T) && T > 0.0, "periodic_orbit needs T > 0");
    auto phi = [&](double v) { return flow_exact(flow_exact(v, +1, m, T), -1, m, T); };

    // g(v) = phi(v) - v is positive below the fixed point and negative above.
    double lo = -v_star(m);
    double hi = -lo;
    double x = 0.0;
    std::size_t it = 0;
    constexpr std::size_t max_it = 1000000;
    for (; it < max_it; ++it) {
        const double x1 = phi(x);
        const double g0 = x1 - x;
        if (g0 == 0.0) {
            break;
        }
        (g0 > 0.0 ? lo : hi) = x;
        const double x2 = phi(x1);
        const double g1 = x2 - x1;
        if (g1 == 0.0) {
            x = x1;
            break;
        }
        if (x1 > lo && x1 < hi) {
            (g1 > 0.0 ? lo : hi) = x1;
        }
        const double scale = std::max(1.0, std::abs(x));
        if (std::abs(g1) < 1e-15 * scale || hi - lo < 4e-16 * scale) {
            x = x2 > lo && x2 < hi ? x2 : x1;
            break;
        }
        // Aitken extrapolation, kept only if it lands inside the bracket.
        const double curv = g1 - g0;
        double next = curv != 0.0 ? x - g0 * g0 / curv : x2;
        if (!(next > lo && next < hi)) {
            next = (x2 > lo && x2 < hi) ? x2 : 0.5 * (lo + hi);
        }
        x = next;
    }
    if (it == max_it) {
        throw NumericalFailure("periodic_orbit: fixed-point iteration did not converge");
    }
    PeriodicOrbit o{};
    o.v_e = x;
    o.p_minus = x;
    o.p_plus = flow_exact(x, +1, m, T);
    o.iterations = it;
    if (std::abs(o.p_minus + o.p_plus) > 1e-9) {
        std::ostringstream msg;
        msg << "periodic_orbit: orbit not symmetric, P- + P+ = " << (o.p_minus + o.p_plus);
        throw NumericalFailure(msg.str());
    }
    return o;
}

GrowthReport delta_quadrature(double epsilon, double m, double T, std::size_t n_nodes)
{
    require(std::isfinite(epsilon) && epsilon >= 0.0 && epsilon <= 1.0, "epsilon must lie in [0, 1]");
    require(std::isfinite(m) && m >= 0.0, "m must be >= 0");
    require(std::isfinite(T) && T > 0.0, "T must be > 0");
    require(n_nodes >= 16, "delta_quadrature needs at least 16 nodes");
    if (m == 0.0) {
        return GrowthReport::deterministic(-2.0 * epsilon, GrowthMethod::OrbitQuadrature, 0);
    }
    const double start = periodic_orbit(m, T).p_minus;
    const std::size_t panels = static_cast<std::size_t>(std::ceil(T));
    const auto& rule = gauss_legendre(n_nodes);
    // Integrate m(cosh V - 1) to keep the constant part exact.
    const double integral = integrate_gl(
        [&](double s) {
            const double v = flow_exact(start, +1, m, s);
            const double sh = std::sinh(0.5 * v);
            return 2.0 * m * sh * sh;
        },
        0.0, T, panels, rule);
    return GrowthReport::deterministic(2.0 * integral / T - 2.0 * epsilon, GrowthMethod::OrbitQuadrature,
                                       panels * n_nodes);
}

std::vector<Segment> segments_of(const EnvironmentPath& env, double horizon)
{
    require(std::isfinite(horizon) && horizon > 0.0, "horizon must be > 0");
    std::vector<Segment> out;
    double t = 0.0;
    int u = env.initial_state;
    for (const Switch& s : env.switches) {
        if (s.time >= horizon) {
            break;
        }
        if (s.time > t) {
            out.push_back({t, s.time, u});
            t = s.time;
        }
        u = s.state;
    }
    out.push_back({t, horizon, u});
    return out;
}

namespace {

void rk4_step(const VectorField& f, double t, std::span<const double> x, int u, double h, std::span<double> out,
              std::vector<double>& work)
{
    const std::size_t n = x.size();
    work.resize(5 * n);
    std::span<double> k1(work.data(), n);
    std::span<double> k2(work.data() + n, n);
    std::span<double> k3(work.data() + 2 * n, n);
    std::span<double> k4(work.data() + 3 * n, n);
    std::span<double> tmp(work.data() + 4 * n, n);
    f(t, x, u, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    f(t + 0.5 * h, tmp, u, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    f(t + 0.5 * h, tmp, u, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
    f(t + h, tmp, u, k4);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

bool admissible(std::span<const double> x, Guard g)
{
    for (double v : x) {
        if (!std::isfinite(v)) {
            return false;
        }
        if (g == Guard::Positive && !(v > 0.0)) {
            return false;
        }
        if (g == Guard::NonNegative && v < 0.0) {
            return false;
        }
    }
    return true;
}

// One step of length h, retried with 2^k substeps if the guard fails.
// Returns the number of halvings used.
int guarded_step(const VectorField& f, double t, std::vector<double>& x, int u, double h, Guard g,
                 std::vector<double>& work)
{
    std::vector<double> out(x.size());
    std::vector<double> cur(x.size());
    for (int halvings = 0; halvings <= 6; ++halvings) {
        const int sub = 1 << halvings;
        const double hs = h / sub;
        cur = x;
        bool ok = true;
        for (int j = 0; j < sub && ok; ++j) {
            rk4_step(f, t + j * hs, cur, u, hs, out, work);
            ok = g == Guard::None ? std::all_of(out.begin(), out.end(), [](double v) { return std::isfinite(v); })
                                  : admissible(out, g);
            cur.swap(out);
        }
        if (ok) {
            x.swap(cur);
            return halvings;
        }
    }
    std::ostringstream msg;
    msg << "step size collapse at t = " << t << " after 6 halvings of dt = " << h;
    throw StepSizeCollapse(msg.str());
}

// Drives the segment loop; `after` may stop the run early by returning false.
template <class After>
void march(const VectorField& f, std::vector<double>& x, const std::vector<Segment>& segments, double dt, Guard g,
           std::size_t stride, Trajectory& traj, After&& after, std::size_t& halvings_total)
{
    std::vector<double> work;
    std::size_t step = 0;
    for (std::size_t si = 0; si < segments.size(); ++si) {
        const Segment& seg = segments[si];
        const double len = seg.t1 - seg.t0;
        if (!(len > 0.0)) {
            continue;
        }
        const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(len / dt - 1e-9)));
        const double h = len / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double t = seg.t0 + static_cast<double>(k) * h;
            halvings_total += static_cast<std::size_t>(guarded_step(f, t, x, seg.u, h, g, work));
            const double t_end = k + 1 == n ? seg.t1 : seg.t0 + static_cast<double>(k + 1) * h;
            ++step;
            const int u_next = k + 1 == n && si + 1 < segments.size() ? segments[si + 1].u : seg.u;
            if (step % stride == 0 || k + 1 == n) {
                traj.push(t_end, x, u_next);
            }
            if (!after(t_end, x, u_next, si, k + 1 == n)) {
                return;
            }
        }
    }
}

} // namespace

Trajectory integrate_rk4(const VectorField& f, Coords coords, std::vector<double> x0,
                         const std::vector<Segment>& segments, const Rk4Options& opt)
{
    require(!segments.empty(), "integrate_rk4 needs at least one segment");
    require(std::isfinite(opt.dt) && opt.dt > 0.0, "dt must be > 0");
    require(opt.record_stride >= 1, "record_stride must be >= 1");
    require(admissible(x0, opt.guard), "initial state violates the positivity requirement");
    Trajectory traj(coords, x0.size());
    traj.push(segments.front().t0, x0, segments.front().u);
    std::size_t halvings = 0;
    march(f, x0, segments, opt.dt, opt.guard, opt.record_stride, traj,
          [](double, const std::vector<double>&, int, std::size_t, bool) { return true; }, halvings);
    if (halvings > 0) {
        traj.notes().push_back("positivity guard halved the step " + std::to_string(halvings) + " time(s)");
    }
    return traj;
}

PatchRates square_rates(const ModelParams& p, int u)
{
    if (!p.rates) {
        return {u - p.epsilon, -u - p.epsilon};
    }
    const SquareRates& r = *p.rates;
    return u > 0 ? PatchRates{r.r1, -r.d2} : PatchRates{-r.d1, r.r2};
}

double asymmetric_v_shift(double beta) { return 0.5 * std::log(beta / (1.0 - beta)); }

std::array<double, 2> uv_field(PatchRates r, double m, double beta, double v)
{
    const double k = 2.0 * m * std::sqrt(beta * (1.0 - beta));
    // 2k(cosh V - 1) = 4k sinh^2(V/2)
    const double sh = std::sinh(0.5 * v);
    const double du = r.a1 + r.a2 + 4.0 * k * sh * sh + 2.0 * (k - m);
    const double dv = r.a1 - r.a2 - 2.0 * m * (1.0 - 2.0 * beta) - 2.0 * k * std::sinh(v);
    return {du, dv};
}

namespace {

void x_field(PatchRates r, double m, double beta, std::span<const double> x, std::span<double> dx)
{
    const double out1 = 2.0 * (1.0 - beta) * m * x[0];
    const double out2 = 2.0 * beta * m * x[1];
    dx[0] = r.a1 * x[0] + out2 - out1;
    dx[1] = r.a2 * x[1] + out1 - out2;
}

} // namespace

Trajectory integrate_rates(const RateFunction& rates, double m, double beta, const EnvironmentPath& env,
                           std::array<double, 2> x0, double horizon, double dt, Coords coords,
                           std::size_t record_stride)
{
    require(std::isfinite(m) && m >= 0.0, "m must be >= 0");
    require(std::isfinite(beta) && beta > 0.0 && beta <= 0.5, "beta_disp must lie in (0, 0.5]");
    require(std::isfinite(dt) && dt > 0.0, "dt must be > 0");
    require(x0[0] > 0.0 && x0[1] > 0.0 && std::isfinite(x0[0]) && std::isfinite(x0[1]),
            "x0 must be componentwise > 0");
    require(coords == Coords::X || coords == Coords::UV, "switched systems use X or UV coordinates");
    require(record_stride >= 1, "record_stride must be >= 1");
    const auto segments = segments_of(env, horizon);
    const double shift = asymmetric_v_shift(beta);

    const VectorField fx = [&](double t, std::span<const double> x, int u, std::span<double> dx) {
        x_field(rates(t, u), m, beta, x, dx);
    };
    const VectorField fuv = [&](double t, std::span<const double> x, int u, std::span<double> dx) {
        const auto d = uv_field(rates(t, u), m, beta, x[1]);
        dx[0] = d[0];
        dx[1] = d[1];
    };

    std::vector<double> x{x0[0], x0[1]};
    if (coords == Coords::UV) {
        x = {std::log(x0[0]) + std::log(x0[1]), std::log(x0[0]) - std::log(x0[1]) - shift};
    }
    Trajectory traj(coords, 2);
    traj.push(0.0, x, segments.front().u);
    for (const Switch& s : env.switches) {
        if (s.time <= horizon) {
            traj.env_trace().push_back(s.time);
        }
    }

    std::size_t halvings = 0;
    bool in_x = coords == Coords::X;
    double stop_time = horizon;
    march(in_x ? fx : fuv, x, segments, dt, in_x ? Guard::Positive : Guard::None, record_stride, traj,
          [&](double t, std::vector<double>& state, int, std::size_t, bool) {
              if (in_x && std::max(state[0], state[1]) > 1e150) {
                  stop_time = t;
                  return false;
              }
              return true;
          },
          halvings);
    if (halvings > 0) {
        traj.notes().push_back("positivity guard halved the step " + std::to_string(halvings) + " time(s)");
    }
    if (in_x && stop_time < horizon) {
        std::ostringstream note;
        note << "state exceeded 1e150 at t = " << stop_time << "; continued in (U, V) coordinates";
        traj.notes().push_back(note.str());
        traj.convert_to_uv(shift);
        std::vector<double> uv{std::log(x[0]) + std::log(x[1]), std::log(x[0]) - std::log(x[1]) - shift};
        std::vector<Segment> rest;
        for (const Segment& s : segments) {
            if (s.t1 > stop_time) {
                rest.push_back({std::max(s.t0, stop_time), s.t1, s.u});
            }
        }
        march(fuv, uv, rest, dt, Guard::None, record_stride, traj,
              [](double, const std::vector<double>&, int, std::size_t, bool) { return true; }, halvings);
    }
    return traj;
}

Trajectory integrate_switched(const ModelParams& params, const EnvironmentPath& env, std::array<double, 2> x0,
                              double horizon, double dt, Coords coords)
{
    params.validate();
    if (dt <= 0.0) {
        dt = params.T / 200.0;
    }
    const ModelParams p = params;
    return integrate_rates([p](double, int u) { return square_rates(p, u); }, params.m, params.beta_disp, env, x0,
                           horizon, dt, coords);
}

AsymmetricRun integrate_asymmetric(const ModelParams& params, const EnvironmentPath& env, std::array<double, 2> x0,
                                   double horizon, double dt)
{
    AsymmetricRun run{integrate_switched(params, env, x0, horizon, dt, Coords::X), 0.0};
    if (run.trajectory.coords() != Coords::X) {
        throw NumericalFailure("integrate_asymmetric: state overflowed, shorten the horizon");
    }
    const double beta = params.beta_disp;
    const double shift = asymmetric_v_shift(beta);
    double dx[2];
    for (std::size_t i = 0; i < run.trajectory.size(); ++i) {
        const auto x = run.trajectory.state(i);
        const PatchRates r = square_rates(params, run.trajectory.env_state(i));
        x_field(r, params.m, beta, x, dx);
        const double du = dx[0] / x[0] + dx[1] / x[1];
        const double dv = dx[0] / x[0] - dx[1] / x[1];
        const auto uv = uv_field(r, params.m, beta, std::log(x[0] / x[1]) - shift);
        run.max_residual = std::max({run.max_residual, std::abs(du - uv[0]), std::abs(dv - uv[1])});
    }
    if (run.max_residual > 1e-6) {
        std::ostringstream msg;
        msg << "integrate_asymmetric: (U, V) identity residual " << run.max_residual << " exceeds 1e-6";
        throw NumericalFailure(msg.str());
    }
    return run;
}

std::array<double, 2> perfect_mixing_reference(const ModelParams& params, const EnvironmentPath& env,
                                               std::array<double, 2> x0, double t)
{
    params.validate();
    const double beta = params.beta_disp;
    double log_growth = 0.0;
    for (const Segment& s : segments_of(env, t)) {
        const PatchRates r = square_rates(params, s.u);
        log_growth += (beta * r.a1 + (1.0 - beta) * r.a2) * (s.t1 - s.t0);
    }
    const double total = (x0[0] + x0[1]) * std::exp(log_growth);
    return {beta * total, (1.0 - beta) * total};
}

} // namespace inflation
