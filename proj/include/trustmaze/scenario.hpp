#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "trustmaze/engine.hpp"

namespace trustmaze {

struct ScenarioParse {
  std::optional<Scenario> scenario;       // set when structurally sound
  std::vector<std::string> diagnostics;   // "<section>.<key>: reason" entries
};

// Structural parse plus full semantic validation. `base_dir` anchors relative
// maze file references. Unknown keys are rejected.
ScenarioParse try_parse_scenario(const Json& doc, const std::filesystem::path& base_dir);

// Throws InvalidScenario with all diagnostics joined.
Scenario parse_scenario(const Json& doc, const std::filesystem::path& base_dir);
Scenario load_scenario_file(const std::filesystem::path& path);

}  // namespace trustmaze
