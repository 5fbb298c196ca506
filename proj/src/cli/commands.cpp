#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "inflation/analytic.hpp"
#include "inflation/applications.hpp"
#include "inflation/density.hpp"
#include "inflation/errors.hpp"
#include "inflation/matrix.hpp"
#include "inflation/model_json.hpp"
#include "inflation/pdmp.hpp"
#include "inflation/switched.hpp"

namespace inflation::cli {

using nlohmann::json;

namespace {

/// Evaluates fn(0..n-1) on `jobs` threads; results keep index order and the
/// exception of the lowest failing index is rethrown.
template <class Row, class Fn>
std::vector<Row> parallel_map(std::size_t n, unsigned jobs, Fn&& fn)
{
    std::vector<Row> rows(n);
    std::vector<std::exception_ptr> errors(n);
    std::size_t next = 0;
    std::mutex mtx;
    auto worker = [&] {
        for (;;) {
            std::size_t i;
            {
                std::lock_guard<std::mutex> lock(mtx);
                if (next >= n) {
                    return;
                }
                i = next++;
            }
            try {
                rows[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned k = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
    if (k == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < k; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return rows;
}

std::string fmt(double x)
{
    if (std::isnan(x)) {
        return "nan";
    }
    std::ostringstream s;
    s.precision(17);
    s << x;
    return s.str();
}

int verdict_line(Streams& io, const std::string& what, double value, double tol)
{
    const bool ok = value <= tol;
    io.report << "check " << what << ": max discrepancy " << fmt(value) << " (tolerance " << fmt(tol) << ") "
              << (ok ? "PASS" : "FAIL") << '\n';
    return ok ? 0 : 3;
}

double rate_of(const RunConfig& cfg, const Options& opt)
{
    if (cfg.signal) {
        if (cfg.signal->kind != SignalKind::MarkovSwitch) {
            throw InvalidArgument("this command needs a markov_switch signal");
        }
        return cfg.signal->rate;
    }
    return opt.number("rate", 1.0 / cfg.params.T);
}

} // namespace

int cmd_delta_surface(const RunConfig& cfg, Streams& io)
{
    const Options opt(cfg.options, {"nodes", "tolerance"}, "delta-surface");
    const std::size_t nodes = opt.count("nodes", 64);
    const double tol = opt.number("tolerance", 1e-8);
    const double eps = cfg.params.epsilon;
    const auto ms = cfg.grid_or("m", cfg.params.m);
    const auto ts = cfg.grid_or("T", cfg.params.T);
    struct Row {
        double m, T, closed, spectral, quad, disc;
    };
    const auto rows = parallel_map<Row>(ms.size() * ts.size(), cfg.jobs, [&](std::size_t k) {
        const double m = ms[k / ts.size()];
        const double T = ts[k % ts.size()];
        const double c = delta_closed(eps, m, T);
        const double s = delta_spectral(eps, m, T);
        const double q = delta_quadrature(eps, m, T, nodes).value;
        return Row{m, T, c, s, q, std::max({std::abs(c - s), std::abs(c - q), std::abs(s - q)})};
    });
    if (cfg.check) {
        double worst = 0.0;
        for (const Row& r : rows) worst = std::max(worst, r.disc);
        return verdict_line(io, "delta-surface", worst, tol);
    }
    io.data << "m,T,delta_closed,delta_spectral,delta_quadrature,max_discrepancy\n";
    for (const Row& r : rows) {
        io.data << fmt(r.m) << ',' << fmt(r.T) << ',' << fmt(r.closed) << ',' << fmt(r.spectral) << ','
                << fmt(r.quad) << ',' << fmt(r.disc) << '\n';
    }
    return 0;
}

int cmd_threshold(const RunConfig& cfg, Streams& io)
{
    const Options opt(cfg.options, {"tolerance"}, "threshold");
    const double tol = opt.number("tolerance", 1e-9);
    const double eps = cfg.params.epsilon;
    const auto ts = cfg.grid_or("T", cfg.params.T);
    struct Row {
        double T, m_star, asym;
        bool ok;
        double residual;
    };
    const auto rows = parallel_map<Row>(ts.size(), cfg.jobs, [&](std::size_t i) {
        const double T = ts[i];
        try {
            const auto r = threshold_m_star(eps, T);
            // Relative bracket check: the exponent changes sign across m*.
            const double below = delta_closed(eps, r.m_star * (1.0 - 1e-9), T);
            const double above = delta_closed(eps, r.m_star * (1.0 + 1e-9), T);
            const double residual = (below <= 0.0 && above >= 0.0) ? std::abs(delta_closed(eps, r.m_star, T)) : 1.0;
            return Row{T, r.m_star, r.asymptote, true, residual};
        } catch (const NoRoot&) {
            return Row{T, std::numeric_limits<double>::quiet_NaN(), std::exp(-(1.0 - eps) * T), false, 0.0};
        }
    });
    if (cfg.check) {
        double worst = 0.0;
        for (const Row& r : rows) worst = std::max(worst, r.residual);
        return verdict_line(io, "threshold |delta(m*)|", worst, tol);
    }
    io.data << "T,m_star,asymptote,ratio,log_m_star_over_T,status\n";
    for (const Row& r : rows) {
        io.data << fmt(r.T) << ',' << fmt(r.m_star) << ',' << fmt(r.asym) << ',' << fmt(r.m_star / r.asym) << ','
                << fmt(std::log(r.m_star) / r.T) << ',' << (r.ok ? "ok" : "no_root") << '\n';
    }
    return 0;
}

int cmd_orbit(const RunConfig& cfg, Streams& io)
{
    const Options opt(cfg.options, {"tolerance"}, "orbit");
    const double tol = opt.number("tolerance", 1e-8);
    const auto ms = cfg.grid_or("m", cfg.params.m);
    const auto ts = cfg.grid_or("T", cfg.params.T);
    struct Row {
        double m, T, v_plus, closed, fixed, disc;
    };
    const auto rows = parallel_map<Row>(ms.size() * ts.size(), cfg.jobs, [&](std::size_t k) {
        const double m = ms[k / ts.size()];
        const double T = ts[k % ts.size()];
        const double c = p_plus(m, T);
        const double f = periodic_orbit(m, T).p_plus;
        return Row{m, T, v_star(m), c, f, std::abs(c - f)};
    });
    if (cfg.check) {
        double worst = 0.0;
        for (const Row& r : rows) worst = std::max(worst, r.disc);
        return verdict_line(io, "orbit", worst, tol);
    }
    io.data << "m,T,v_plus,p_plus_closed,p_plus_fixed_point,discrepancy\n";
    for (const Row& r : rows) {
        io.data << fmt(r.m) << ',' << fmt(r.T) << ',' << fmt(r.v_plus) << ',' << fmt(r.closed) << ','
                << fmt(r.fixed) << ',' << fmt(r.disc) << '\n';
    }
    return 0;
}

int cmd_pdmp(const RunConfig& cfg, Streams& io)
{
    const Options opt(cfg.options, {"rate", "horizon", "replicas", "method", "z_tolerance"}, "pdmp");
    const double eps = cfg.params.epsilon;
    const double m = cfg.params.m;
    const double rate = rate_of(cfg, opt);
    const double horizon = opt.number("horizon", 1e5);
    const std::size_t replicas = opt.count("replicas", 1);
    const std::string method = opt.text("method", "u_slope");
    const double ztol = opt.number("z_tolerance", 4.0);
    if (method != "u_slope" && method != "polar") {
        throw InvalidArgument("options for pdmp: method must be 'u_slope' or 'polar'");
    }
    if (replicas == 0) {
        throw InvalidArgument("options for pdmp: replicas must be >= 1");
    }
    const auto reports = parallel_map<GrowthReport>(replicas, cfg.jobs, [&](std::size_t i) {
        if (method == "polar") {
            GrowthReport r = lyapunov_polar(eps, m, rate, horizon, cfg.seed, 0.02, 0.05, 32, i);
            // Report on the U-slope scale.
            r.value *= 2.0;
            *r.std_error *= 2.0;
            return r;
        }
        PdmpOptions o;
        o.stream = i;
        return simulate_pdmp(eps, m, rate, horizon, cfg.seed, o).report;
    });
    if (cfg.check) {
        const double ref = delta_pdmp_quadrature(eps, m, 1.0 / rate).value;
        double worst = 0.0;
        for (const auto& r : reports) {
            worst = std::max(worst, std::abs(r.value - ref) / std::max(*r.std_error, 1e-300));
        }
        return verdict_line(io, "pdmp |estimate - density quadrature| / stderr", worst, ztol);
    }
    for (std::size_t i = 0; i < reports.size(); ++i) {
        json j = to_json(reports[i]);
        j["epsilon"] = eps;
        j["m"] = m;
        j["rate"] = rate;
        j["replica"] = i;
        j["stream"] = i;
        j["estimator"] = method;
        io.data << j.dump() << '\n';
    }
    return 0;
}

int cmd_density(const RunConfig& cfg, Streams& io)
{
    const Options opt(cfg.options, {"points", "tolerance"}, "density");
    const std::size_t points = opt.count("points", 2001);
    const double tol = opt.number("tolerance", 1e-8);
    const InvariantDensity rho(cfg.params.m, cfg.params.T);
    if (cfg.check) {
        const double mass = rho.mass(-rho.v_plus(), rho.v_plus());
        const double sym = std::abs(rho(0.3 * rho.v_plus()) - rho(-0.3 * rho.v_plus())) / rho(0.3 * rho.v_plus());
        // Re-read the emitted table and integrate it the way a consumer would.
        std::stringstream table;
        rho.write_csv(table, points);
        std::string line;
        std::getline(table, line);
        double trap = 0.0, pv = 0.0, pr = 0.0, v0 = 0.0;
        bool first = true;
        while (std::getline(table, line)) {
            std::istringstream row(line);
            std::string cell;
            std::vector<double> c;
            while (std::getline(row, cell, ',')) c.push_back(std::stod(cell));
            if (first) v0 = c[0];
            else trap += 0.5 * (c[3] + pr) * (c[0] - pv);
            pv = c[0];
            pr = c[3];
            first = false;
        }
        io.report << "density: tail exponent " << fmt(rho.tail_exponent()) << ", bounded at endpoints "
                  << (rho.bounded_at_endpoints() ? "yes" : "no") << ", trapezoid of the table " << fmt(trap)
                  << ", mass outside the table " << fmt(1.0 - rho.mass(v0, pv)) << '\n';
        return verdict_line(io, "density |mass - 1| and symmetry", std::max(std::abs(mass - 1.0), sym), tol);
    }
    rho.write_csv(io.data, points);
    return 0;
}

int cmd_sape(const RunConfig& cfg, Streams& io)
{
    const Options opt(cfg.options, {"horizon", "eta"}, "sape");
    const double eps = cfg.params.epsilon;
    const double m = cfg.params.m;
    const double T = cfg.params.T;
    const double horizon = opt.number("horizon", 2e4);
    std::vector<double> etas = cfg.grid_or("eta", opt.number("eta", 0.0));
    const double ref = delta_closed(eps, m, T);
    const auto reports = parallel_map<GrowthReport>(etas.size(), cfg.jobs, [&](std::size_t i) {
        PdmpOptions o;
        o.stream = i;
        return simulate_sape(eps, m, T, etas[i], horizon, cfg.seed, o);
    });
    if (cfg.check) {
        double worst = 0.0;
        for (std::size_t i = 0; i < etas.size(); ++i) {
            if (etas[i] == 0.0) {
                worst = std::max(worst, std::abs(reports[i].value - ref));
            }
        }
        return verdict_line(io, "sape eta = 0 against the periodic exponent", worst, 1e-6);
    }
    for (std::size_t i = 0; i < reports.size(); ++i) {
        json j = to_json(reports[i]);
        j["epsilon"] = eps;
        j["m"] = m;
        j["T"] = T;
        j["eta"] = etas[i];
        j["stream"] = i;
        j["delta_periodic"] = ref;
        io.data << j.dump() << '\n';
    }
    return 0;
}

int cmd_persistence(const RunConfig& cfg, Streams& io)
{
    const Options opt(cfg.options, {"mode", "periods", "threshold", "burn_in", "dt", "x0"}, "persistence");
    const double eps = cfg.params.epsilon;
    const double alpha = cfg.params.alpha;
    const double T = cfg.params.T;
    if (!(alpha > 0.0)) {
        throw InvalidArgument("persistence needs params.alpha > 0");
    }
    const std::string mode_name = opt.text("mode", "periodic");
    if (mode_name != "periodic" && mode_name != "markov") {
        throw InvalidArgument("options for persistence: mode must be 'periodic' or 'markov'");
    }
    const SwitchingMode mode = mode_name == "periodic" ? SwitchingMode::Periodic : SwitchingMode::Markov;
    const double periods = opt.number("periods", 1000.0);
    const double threshold = opt.number("threshold", 1e-8);
    const double burn = opt.number("burn_in", 0.5);
    const double dt = opt.number("dt", T / 200.0);
    const double x0 = opt.number("x0", 1.0);
    const double horizon = periods * 2.0 * T;
    const auto ms = cfg.grid_or("m", cfg.params.m);
    struct Row {
        double m;
        Verdict verdict;
        Verdict predicted;
        double delta;
    };
    const auto rows = parallel_map<Row>(ms.size(), cfg.jobs, [&](std::size_t i) {
        const double m = ms[i];
        const EnvironmentSignal sig =
            mode == SwitchingMode::Periodic ? EnvironmentSignal::periodic(T) : EnvironmentSignal::markov(1.0 / T);
        EnvironmentSampler sampler(sig, cfg.seed, i);
        EnvironmentPath env{sig.initial_state, {}};
        while (sampler.next_switch() <= horizon) {
            env.switches.push_back(sampler.advance());
        }
        const Trajectory traj = simulate_density_dependent(eps, alpha, m, env, {x0, x0}, horizon, dt, 20);
        const double delta = mode == SwitchingMode::Periodic
                                 ? delta_closed(eps, m, T)
                                 : (m == 0.0 ? -2.0 * eps : delta_pdmp_quadrature(eps, m, T).value);
        return Row{m, classify_persistence(traj, threshold, burn).verdict, predict_persistence(eps, m, T, mode),
                   delta};
    });
    if (cfg.check) {
        // Cells next to a sign change of the exponent are excused.
        double mismatches = 0.0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const bool edge = (i > 0 && (rows[i - 1].delta > 0) != (rows[i].delta > 0)) ||
                              (i + 1 < rows.size() && (rows[i + 1].delta > 0) != (rows[i].delta > 0));
            if (!edge && rows[i].verdict != rows[i].predicted) {
                mismatches += 1.0;
            }
        }
        return verdict_line(io, "persistence mismatches away from sign changes", mismatches, 0.0);
    }
    io.data << "m,verdict,delta_sign,predicted,delta\n";
    for (const Row& r : rows) {
        io.data << fmt(r.m) << ',' << to_string(r.verdict) << ',' << (r.delta > 0 ? "+" : r.delta < 0 ? "-" : "0")
                << ',' << to_string(r.predicted) << ',' << fmt(r.delta) << '\n';
    }
    return 0;
}

int cmd_sir(const RunConfig& cfg, Streams& io)
{
    const Options opt(cfg.options,
                      {"beta_n", "gamma_n", "mu", "beta_s", "gamma_s", "T", "phase_shift", "N", "i1_0", "i2_0",
                       "horizon", "dt", "stride", "trajectory_out"},
                      "sir");
    HoltParams h;
    h.beta_n = opt.number("beta_n", h.beta_n);
    h.gamma_n = opt.number("gamma_n", h.gamma_n);
    h.mu = opt.number("mu", h.mu);
    h.beta_s = opt.number("beta_s", h.beta_s);
    h.gamma_s = opt.number("gamma_s", h.gamma_s);
    h.T = opt.number("T", h.T);
    h.phase_shift = opt.number("phase_shift", h.phase_shift);
    h.N = opt.number("N", h.N);
    h.i1_0 = opt.number("i1_0", h.i1_0);
    h.i2_0 = opt.number("i2_0", h.i2_0);
    h.validate();
    const double horizon = opt.number("horizon", 1500.0);
    const double dt = opt.number("dt", 0.1);
    const std::size_t stride = opt.count("stride", 10);
    const std::string traj_out = opt.text("trajectory_out", "");
    const double m = cfg.params.m;

    if (cfg.check) {
        const SirRun run = simulate_sir(h, m, horizon, dt, stride);
        const auto first = run.trajectory.state(0);
        double total0 = 0.0;
        for (std::size_t k : {0u, 1u, 2u, 3u, 6u, 7u}) total0 += first[k];
        double worst = 0.0;
        for (std::size_t i = 0; i < run.trajectory.size(); ++i) {
            const auto x = run.trajectory.state(i);
            double total = 0.0;
            for (std::size_t k : {0u, 1u, 2u, 3u, 6u, 7u}) total += x[k];
            worst = std::max(worst, std::abs(total - total0) / total0);
        }
        return verdict_line(io, "sir population balance (relative)", worst, 1e-9);
    }

    auto write_trajectory = [&](std::ostream& out) {
        simulate_sir(h, m, horizon, dt, stride).trajectory.write_csv(out);
    };
    if (!traj_out.empty()) {
        std::ofstream f(traj_out);
        if (!f) {
            throw InvalidArgument("cannot open output file '" + traj_out + "'");
        }
        write_trajectory(f);
    }
    if (cfg.has_grid("m")) {
        const auto ms = cfg.grids.at("m").values;
        const auto rows = parallel_map<CasesRow>(ms.size(), cfg.jobs, [&](std::size_t i) {
            return cumulative_cases_sweep(h, {ms[i]}, horizon, dt).front();
        });
        io.data << "m,cumulative_cases\n";
        for (const auto& r : rows) {
            io.data << fmt(r.m) << ',' << fmt(r.cumulative_cases) << '\n';
        }
    } else if (traj_out.empty()) {
        write_trajectory(io.data);
    }
    return 0;
}

const std::vector<CommandInfo>& commands()
{
    static const std::vector<CommandInfo> list = {
        {"delta-surface", "growth exponent on an (m, T) grid by three independent routes", cmd_delta_surface},
        {"threshold", "smallest dispersal rate giving growth, over a T grid", cmd_threshold},
        {"orbit", "extremes of the periodic V-orbit, closed form against fixed point", cmd_orbit},
        {"pdmp", "Monte Carlo growth exponent under Markov switching (JSONL)", cmd_pdmp},
        {"density", "invariant density of V under Markov switching (CSV)", cmd_density},
        {"sape", "growth exponent under nearly periodic random switching (JSONL)", cmd_sape},
        {"persistence", "extinction or persistence of the logistic model over an m grid", cmd_persistence},
        {"sir", "two-patch SIR epidemic: trajectory or cumulative cases over an m grid", cmd_sir},
    };
    return list;
}

const CommandInfo& find_command(const std::string& name)
{
    for (const auto& c : commands()) {
        if (c.name == name) {
            return c;
        }
    }
    throw InvalidArgument("unknown command '" + name + "'");
}

} // namespace inflation::cli
