#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "inflation/errors.hpp"
#include "inflation/model_json.hpp"

namespace inflation::cli {

using nlohmann::json;

GridSpec GridSpec::range(double lo, double hi, std::size_t n, bool log_scale)
{
    if (n == 0) {
        throw InvalidArgument("grid needs at least one point");
    }
    if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo) {
        throw InvalidArgument("grid bounds must be finite with min <= max");
    }
    if (log_scale && !(lo > 0.0)) {
        throw InvalidArgument("log-scaled grid needs min > 0");
    }
    GridSpec g;
    g.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        g.values[i] = log_scale ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))) : lo + f * (hi - lo);
    }
    g.values.back() = n == 1 ? lo : hi;
    return g;
}

GridSpec GridSpec::from_json(const json& j, const std::string& name)
{
    const std::string where = "grid '" + name + "'";
    if (j.is_array()) {
        GridSpec g;
        for (const auto& v : j) {
            if (!v.is_number()) {
                throw InvalidArgument(where + ": values must be numbers");
            }
            g.values.push_back(v.get<double>());
        }
        if (g.values.empty()) {
            throw InvalidArgument(where + " is empty");
        }
        return g;
    }
    detail::check_keys(j, {"min", "max", "n", "scale", "values"}, where);
    if (j.contains("values")) {
        if (j.size() != 1) {
            throw InvalidArgument(where + ": 'values' excludes min/max/n/scale");
        }
        return from_json(j.at("values"), name);
    }
    for (const char* k : {"min", "max", "n"}) {
        if (!j.contains(k) || !j.at(k).is_number()) {
            throw InvalidArgument(where + ": '" + k + "' must be a number");
        }
    }
    const std::string scale = j.value("scale", std::string("linear"));
    if (scale != "linear" && scale != "log") {
        throw InvalidArgument(where + ": scale must be 'linear' or 'log'");
    }
    if (!j.at("n").is_number_integer() || j.at("n").get<long long>() < 1) {
        throw InvalidArgument(where + ": 'n' must be a positive integer");
    }
    return range(j.at("min").get<double>(), j.at("max").get<double>(), j.at("n").get<std::size_t>(),
                 scale == "log");
}

GridSpec GridSpec::parse(const std::string& text, const std::string& name)
{
    auto number = [&](const std::string& s) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) {
                throw std::invalid_argument(s);
            }
            return v;
        } catch (const std::exception&) {
            throw InvalidArgument("grid '" + name + "': cannot parse '" + s + "'");
        }
    };
    std::vector<std::string> parts;
    const char sep = text.find(':') != std::string::npos ? ':' : ',';
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, sep);) {
        parts.push_back(p);
    }
    if (sep == ',') {
        GridSpec g;
        for (const auto& p : parts) {
            g.values.push_back(number(p));
        }
        if (g.values.empty()) {
            throw InvalidArgument("grid '" + name + "' is empty");
        }
        return g;
    }
    if (parts.size() < 3 || parts.size() > 4 || (parts.size() == 4 && parts[3] != "log" && parts[3] != "linear")) {
        throw InvalidArgument("grid '" + name + "': expected min:max:n[:log]");
    }
    const double n = number(parts[2]);
    if (n < 1 || n != std::floor(n)) {
        throw InvalidArgument("grid '" + name + "': n must be a positive integer");
    }
    return range(number(parts[0]), number(parts[1]), static_cast<std::size_t>(n),
                 parts.size() == 4 && parts[3] == "log");
}

std::vector<double> RunConfig::grid_or(const std::string& name, double fallback) const
{
    const auto it = grids.find(name);
    return it == grids.end() ? std::vector<double>{fallback} : it->second.values;
}

RunConfig config_from_json(const json& j)
{
    detail::check_keys(j, {"command", "params", "signal", "grid", "out", "seed", "jobs", "check", "options"},
                       "config");
    RunConfig c;
    if (j.contains("command")) {
        if (!j.at("command").is_string()) {
            throw InvalidArgument("config: 'command' must be a string");
        }
        c.command = j.at("command").get<std::string>();
    }
    if (j.contains("params")) {
        c.params = params_from_json(j.at("params"));
    }
    if (j.contains("signal")) {
        c.signal = signal_from_json(j.at("signal"));
    }
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        if (!g.is_object()) {
            throw InvalidArgument("config: 'grid' must be an object");
        }
        for (const auto& item : g.items()) {
            c.grids[item.key()] = GridSpec::from_json(item.value(), item.key());
        }
    }
    if (j.contains("out")) {
        if (!j.at("out").is_string()) {
            throw InvalidArgument("config: 'out' must be a string");
        }
        c.out = j.at("out").get<std::string>();
    }
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) {
            throw InvalidArgument("config: 'seed' must be a non-negative integer");
        }
        c.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("jobs")) {
        if (!j.at("jobs").is_number_unsigned() || j.at("jobs").get<unsigned>() == 0) {
            throw InvalidArgument("config: 'jobs' must be a positive integer");
        }
        c.jobs = j.at("jobs").get<unsigned>();
    }
    if (j.contains("check")) {
        if (!j.at("check").is_boolean()) {
            throw InvalidArgument("config: 'check' must be a boolean");
        }
        c.check = j.at("check").get<bool>();
    }
    if (j.contains("options")) {
        if (!j.at("options").is_object()) {
            throw InvalidArgument("config: 'options' must be an object");
        }
        c.options = j.at("options");
    }
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot open config file '" + path + "'");
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidArgument("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

Options::Options(const json& j, std::initializer_list<std::string_view> allowed, const std::string& command)
    : j_(j), where_("options for " + command)
{
    detail::check_keys(j, allowed, where_);
}

double Options::number(const char* key, double fallback) const
{
    if (!j_.contains(key)) {
        return fallback;
    }
    if (!j_.at(key).is_number()) {
        throw InvalidArgument(where_ + ": '" + key + "' must be a number");
    }
    return j_.at(key).get<double>();
}

std::size_t Options::count(const char* key, std::size_t fallback) const
{
    if (!j_.contains(key)) {
        return fallback;
    }
    if (!j_.at(key).is_number_unsigned()) {
        throw InvalidArgument(where_ + ": '" + key + "' must be a non-negative integer");
    }
    return j_.at(key).get<std::size_t>();
}

std::string Options::text(const char* key, const std::string& fallback) const
{
    if (!j_.contains(key)) {
        return fallback;
    }
    if (!j_.at(key).is_string()) {
        throw InvalidArgument(where_ + ": '" + key + "' must be a string");
    }
    return j_.at(key).get<std::string>();
}

bool Options::flag(const char* key, bool fallback) const
{
    if (!j_.contains(key)) {
        return fallback;
    }
    if (!j_.at(key).is_boolean()) {
        throw InvalidArgument(where_ + ": '" + key + "' must be a boolean");
    }
    return j_.at(key).get<bool>();
}

} // namespace inflation::cli
