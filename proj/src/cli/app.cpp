#include "app.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "commands.hpp"
#include "config.hpp"
#include "inflation/errors.hpp"

namespace inflation::cli {

namespace {

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> jobs;
    std::optional<std::string> out;
    bool check = false;
    std::optional<double> epsilon, m, T, alpha;
    std::optional<double> rate, horizon, eta;
    std::vector<std::string> grids;
    std::vector<std::string> options;
};

void add_flags(CLI::App& app, Flags& f)
{
    app.add_option("--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--seed", f.seed, "master seed for stochastic commands");
    app.add_option("--jobs", f.jobs, "worker threads for grid points")->check(CLI::PositiveNumber);
    app.add_option("--out", f.out, "output path, '-' for stdout");
    app.add_flag("--check", f.check, "run the internal oracle comparison instead of writing data");
    app.add_option("--epsilon", f.epsilon, "mortality offset");
    app.add_option("--m", f.m, "dispersal rate");
    app.add_option("--T", f.T, "half-period or mean sojourn");
    app.add_option("--alpha", f.alpha, "density dependence");
    app.add_option("--rate", f.rate, "Markov switching rate");
    app.add_option("--horizon", f.horizon, "simulated time");
    app.add_option("--eta", f.eta, "sojourn half-width");
    app.add_option("--grid", f.grids, "NAME=min:max:n[:log] or NAME=v1,v2,...");
    app.add_option("--option", f.options, "KEY=VALUE command option (VALUE parsed as JSON when possible)");
}

void apply(const Flags& f, RunConfig& c)
{
    if (f.seed) c.seed = *f.seed;
    if (f.jobs) c.jobs = *f.jobs;
    if (f.out) c.out = *f.out;
    if (f.check) c.check = true;
    if (f.epsilon) c.params.epsilon = *f.epsilon;
    if (f.m) c.params.m = *f.m;
    if (f.T) c.params.T = *f.T;
    if (f.alpha) c.params.alpha = *f.alpha;
    if (f.rate) c.options["rate"] = *f.rate;
    if (f.horizon) c.options["horizon"] = *f.horizon;
    if (f.eta) c.options["eta"] = *f.eta;
    for (const auto& g : f.grids) {
        const auto eq = g.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw InvalidArgument("--grid expects NAME=SPEC, got '" + g + "'");
        }
        const std::string name = g.substr(0, eq);
        c.grids[name] = GridSpec::parse(g.substr(eq + 1), name);
    }
    for (const auto& o : f.options) {
        const auto eq = o.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw InvalidArgument("--option expects KEY=VALUE, got '" + o + "'");
        }
        const std::string value = o.substr(eq + 1);
        auto parsed = nlohmann::json::parse(value, nullptr, false);
        c.options[o.substr(0, eq)] = parsed.is_discarded() ? nlohmann::json(value) : parsed;
    }
    c.params.validate();
}

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    const CommandInfo& cmd = find_command(cfg.command);
    if (cfg.check || cfg.out == "-") {
        Streams io{out, cfg.check ? out : err};
        return cmd.run(cfg, io);
    }
    std::ofstream file(cfg.out);
    if (!file) {
        throw InvalidArgument("cannot open output file '" + cfg.out + "'");
    }
    Streams io{file, err};
    const int code = cmd.run(cfg, io);
    file.flush();
    if (!file) {
        throw InvalidArgument("write failed for '" + cfg.out + "'");
    }
    return code;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Growth exponents of two-patch populations in switching environments", "inflation"};
    app.require_subcommand(0, 1);
    Flags flags;
    add_flags(app, flags);
    std::map<std::string, CLI::App*> subs;
    for (const auto& c : commands()) {
        auto* sub = app.add_subcommand(c.name, c.summary);
        sub->fallthrough();
        subs[c.name] = sub;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "inflation: " << e.what() << '\n';
        return 2;
    }
    try {
        RunConfig cfg;
        if (!flags.config.empty()) {
            cfg = load_config(flags.config);
        }
        for (const auto& [name, sub] : subs) {
            if (sub->parsed()) {
                if (!cfg.command.empty() && cfg.command != name) {
                    throw InvalidArgument("command '" + name + "' conflicts with config command '" + cfg.command +
                                          "'");
                }
                cfg.command = name;
            }
        }
        if (cfg.command.empty()) {
            throw InvalidArgument("no command given; run with --help for the list");
        }
        apply(flags, cfg);
        return dispatch(cfg, out, err);
    } catch (const InvalidArgument& e) {
        err << "inflation: " << e.what() << '\n';
        return 2;
    } catch (const NumericalFailure& e) {
        err << "inflation: numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const nlohmann::json::exception& e) {
        err << "inflation: " << e.what() << '\n';
        return 2;
    }
}

} // namespace inflation::cli
