#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "inflation/model.hpp"

namespace inflation::cli {

/// One swept parameter: explicit values, or n points between min and max.
struct GridSpec {
    std::vector<double> values;

    static GridSpec range(double lo, double hi, std::size_t n, bool log_scale);
    static GridSpec from_json(const nlohmann::json& j, const std::string& name);
    /// "min:max:n" or "min:max:n:log" or a comma-separated list.
    static GridSpec parse(const std::string& text, const std::string& name);
};

struct RunConfig {
    std::string command;
    ModelParams params;
    std::optional<EnvironmentSignal> signal;
    std::map<std::string, GridSpec> grids;
    nlohmann::json options = nlohmann::json::object();
    std::string out = "-";
    std::uint64_t seed = 1;
    unsigned jobs = 1;
    bool check = false;

    bool has_grid(const std::string& name) const { return grids.count(name) != 0; }
    /// The named grid, or a single value when absent.
    std::vector<double> grid_or(const std::string& name, double fallback) const;
};

/// Parses a config document; unknown keys anywhere are rejected.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// Typed access to `options` with defaults; `allowed` lists every key the
/// command understands and is enforced up front.
class Options {
public:
    Options(const nlohmann::json& j, std::initializer_list<std::string_view> allowed, const std::string& command);

    double number(const char* key, double fallback) const;
    std::size_t count(const char* key, std::size_t fallback) const;
    std::string text(const char* key, const std::string& fallback) const;
    bool flag(const char* key, bool fallback) const;

private:
    const nlohmann::json& j_;
    std::string where_;
};

} // namespace inflation::cli
