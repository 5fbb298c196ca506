#pragma once

#include "json.hpp"

#include "inflation/model.hpp"

namespace inflation {

// Strict JSON mapping: unknown keys are rejected with InvalidArgument,
// missing keys keep their defaults.

ModelParams params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ModelParams& p);

SojournDistribution sojourn_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SojournDistribution& s);

EnvironmentSignal signal_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EnvironmentSignal& s);

nlohmann::json to_json(const GrowthReport& r);

namespace detail {

/// Throws InvalidArgument naming the first key of `j` not in `allowed`.
void check_keys(const nlohmann::json& j, std::initializer_list<std::string_view> allowed, std::string_view where);

} // namespace detail

} // namespace inflation
