#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "dynpin/sim.hpp"

namespace dynpin {

/// Parses a scenario document. Every game and learner invariant is checked
/// eagerly; failures throw ParseError naming the JSON path and the broken
/// constraint (plus line and column for syntax errors).
Scenario parse_scenario_text(std::string_view text);
Scenario parse_scenario(const std::filesystem::path& path);

/// Canonical document for `scenario`; parse_scenario_text(to_json(s).dump())
/// reproduces `s`. Unbounded total_work is written as null.
nlohmann::ordered_json to_json(const Scenario& scenario);

}  // namespace dynpin
