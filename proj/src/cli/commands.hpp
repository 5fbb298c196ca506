#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace inflation::cli {

/// Output sink for one command: data goes to `data`, the --check report and
/// notes go to `report`.
struct Streams {
    std::ostream& data;
    std::ostream& report;
};

using Command = std::function<int(const RunConfig&, Streams&)>;

struct CommandInfo {
    std::string name;
    std::string summary;
    Command run;
};

const std::vector<CommandInfo>& commands();
const CommandInfo& find_command(const std::string& name);

int cmd_delta_surface(const RunConfig& cfg, Streams& io);
int cmd_threshold(const RunConfig& cfg, Streams& io);
int cmd_orbit(const RunConfig& cfg, Streams& io);
int cmd_pdmp(const RunConfig& cfg, Streams& io);
int cmd_density(const RunConfig& cfg, Streams& io);
int cmd_sape(const RunConfig& cfg, Streams& io);
int cmd_persistence(const RunConfig& cfg, Streams& io);
int cmd_sir(const RunConfig& cfg, Streams& io);

} // namespace inflation::cli
