#include "inflation/model_json.hpp"

#include <algorithm>
#include <string>

#include "inflation/errors.hpp"

namespace inflation {

using nlohmann::json;

namespace detail {

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view where)
{
    if (!j.is_object()) {
        throw InvalidArgument(std::string(where) + ": expected a JSON object");
    }
    for (const auto& item : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
            throw InvalidArgument(std::string(where) + ": unknown key '" + item.key() + "'");
        }
    }
}

} // namespace detail

namespace {

double number(const json& j, const char* key, double fallback, std::string_view where)
{
    if (!j.contains(key)) {
        return fallback;
    }
    const json& v = j.at(key);
    if (!v.is_number()) {
        throw InvalidArgument(std::string(where) + ": '" + key + "' must be a number");
    }
    return v.get<double>();
}

std::string_view kind_name(SojournKind k)
{
    switch (k) {
    case SojournKind::Dirac:
        return "dirac";
    case SojournKind::Exponential:
        return "exponential";
    case SojournKind::Uniform:
        return "uniform";
    }
    return "dirac";
}

std::string_view kind_name(SignalKind k)
{
    switch (k) {
    case SignalKind::PeriodicSquare:
        return "periodic_square";
    case SignalKind::MarkovSwitch:
        return "markov_switch";
    case SignalKind::RenewalSwitch:
        return "renewal_switch";
    }
    return "periodic_square";
}

std::string string_field(const json& j, const char* key, std::string_view where)
{
    if (!j.contains(key) || !j.at(key).is_string()) {
        throw InvalidArgument(std::string(where) + ": '" + key + "' must be a string");
    }
    return j.at(key).get<std::string>();
}

} // namespace

ModelParams params_from_json(const json& j)
{
    detail::check_keys(j, {"epsilon", "m", "T", "alpha", "beta_disp", "phi", "rates"}, "params");
    ModelParams p;
    p.epsilon = number(j, "epsilon", p.epsilon, "params");
    p.m = number(j, "m", p.m, "params");
    p.T = number(j, "T", p.T, "params");
    p.alpha = number(j, "alpha", p.alpha, "params");
    p.beta_disp = number(j, "beta_disp", p.beta_disp, "params");
    p.phi = number(j, "phi", p.phi, "params");
    if (j.contains("rates") && !j.at("rates").is_null()) {
        const json& r = j.at("rates");
        detail::check_keys(r, {"r1", "d1", "r2", "d2"}, "rates");
        for (const char* k : {"r1", "d1", "r2", "d2"}) {
            if (!r.contains(k)) {
                throw InvalidArgument(std::string("rates: missing '") + k + "'");
            }
        }
        p.rates = SquareRates{number(r, "r1", 0, "rates"), number(r, "d1", 0, "rates"),
                              number(r, "r2", 0, "rates"), number(r, "d2", 0, "rates")};
    }
    p.validate();
    return p;
}

json to_json(const ModelParams& p)
{
    json j = {{"epsilon", p.epsilon}, {"m", p.m},         {"T", p.T},
              {"alpha", p.alpha},     {"beta_disp", p.beta_disp}, {"phi", p.phi}};
    if (p.rates) {
        j["rates"] = {{"r1", p.rates->r1}, {"d1", p.rates->d1}, {"r2", p.rates->r2}, {"d2", p.rates->d2}};
    }
    return j;
}

SojournDistribution sojourn_from_json(const json& j)
{
    detail::check_keys(j, {"kind", "T", "eta"}, "sojourn");
    const std::string kind = string_field(j, "kind", "sojourn");
    SojournDistribution s;
    s.mean = number(j, "T", s.mean, "sojourn");
    s.half_width = number(j, "eta", 0.0, "sojourn");
    if (kind == "dirac") {
        s.kind = SojournKind::Dirac;
    } else if (kind == "exponential") {
        s.kind = SojournKind::Exponential;
    } else if (kind == "uniform") {
        s.kind = SojournKind::Uniform;
    } else {
        throw InvalidArgument("sojourn: unknown kind '" + kind + "'");
    }
    if (s.kind != SojournKind::Uniform && s.half_width != 0.0) {
        throw InvalidArgument("sojourn: 'eta' only applies to uniform sojourns");
    }
    s.validate();
    return s;
}

json to_json(const SojournDistribution& s)
{
    json j = {{"kind", kind_name(s.kind)}, {"T", s.mean}};
    if (s.kind == SojournKind::Uniform) {
        j["eta"] = s.half_width;
    }
    return j;
}

EnvironmentSignal signal_from_json(const json& j)
{
    detail::check_keys(j, {"kind", "T", "phase_origin", "rate", "sojourn_minus", "sojourn_plus", "initial_state"},
                       "signal");
    const std::string kind = string_field(j, "kind", "signal");
    EnvironmentSignal s;
    if (j.contains("initial_state")) {
        if (!j.at("initial_state").is_number_integer()) {
            throw InvalidArgument("signal: 'initial_state' must be +1 or -1");
        }
        s.initial_state = j.at("initial_state").get<int>();
    }
    auto forbid = [&](std::initializer_list<const char*> keys) {
        for (const char* k : keys) {
            if (j.contains(k)) {
                throw InvalidArgument("signal: '" + std::string(k) + "' does not apply to " + kind);
            }
        }
    };
    if (kind == "periodic_square") {
        forbid({"rate", "sojourn_minus", "sojourn_plus"});
        s.kind = SignalKind::PeriodicSquare;
        s.half_period = number(j, "T", s.half_period, "signal");
        s.phase_origin = number(j, "phase_origin", 0.0, "signal");
    } else if (kind == "markov_switch") {
        forbid({"T", "phase_origin", "sojourn_minus", "sojourn_plus"});
        s.kind = SignalKind::MarkovSwitch;
        s.rate = number(j, "rate", s.rate, "signal");
    } else if (kind == "renewal_switch") {
        forbid({"T", "phase_origin", "rate"});
        s.kind = SignalKind::RenewalSwitch;
        if (!j.contains("sojourn_minus") || !j.contains("sojourn_plus")) {
            throw InvalidArgument("signal: renewal_switch needs sojourn_minus and sojourn_plus");
        }
        s.sojourn_minus = sojourn_from_json(j.at("sojourn_minus"));
        s.sojourn_plus = sojourn_from_json(j.at("sojourn_plus"));
    } else {
        throw InvalidArgument("signal: unknown kind '" + kind + "'");
    }
    s.validate();
    return s;
}

json to_json(const EnvironmentSignal& s)
{
    json j = {{"kind", kind_name(s.kind)}, {"initial_state", s.initial_state}};
    switch (s.kind) {
    case SignalKind::PeriodicSquare:
        j["T"] = s.half_period;
        j["phase_origin"] = s.phase_origin;
        break;
    case SignalKind::MarkovSwitch:
        j["rate"] = s.rate;
        break;
    case SignalKind::RenewalSwitch:
        j["sojourn_minus"] = to_json(s.sojourn_minus);
        j["sojourn_plus"] = to_json(s.sojourn_plus);
        break;
    }
    return j;
}

json to_json(const GrowthReport& r)
{
    json j = {{"value", r.value}, {"method", to_string(r.method)}, {"horizon", r.horizon}, {"samples", r.samples}};
    j["stderr"] = r.std_error ? json(*r.std_error) : json(nullptr);
    j["seed"] = r.seed ? json(*r.seed) : json(nullptr);
    return j;
}

} // namespace inflation
