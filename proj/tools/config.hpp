#pragma once

#include <filesystem>
#include <istream>
#include <string_view>

#include "weakmeas/protocols.hpp"
#include "weakmeas/qstate.hpp"

namespace weakmeas::cli {

/// Parses the flat `key = value` experiment format (see docs/config-format.md).
/// Throws Error(InvalidConfig) naming the offending key or line.
ExperimentConfig parse_config(std::istream& in);

/// Throws std::ios_base::failure when the file cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path);

/// x, -y, z+ ... or a parenthesised triple "(0.6, 0, 0.8)"; triples are rescaled to unit length.
BlochDirection parse_direction(std::string_view text);

/// Named state (x+ x- y+ y- z+ z-) or a direction, read as the +1 eigenket along it.
Ket parse_state(std::string_view text);

}  // namespace weakmeas::cli
