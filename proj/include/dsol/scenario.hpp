#pragma once

#include <string>

#include "dsol/budget.hpp"

namespace dsol::scenario {

// A link scenario loaded from an INI-style file, plus the registry it
// points at and optional output preferences. See README.md for the format.
struct ScenarioFile {
  budget::LinkScenario scenario;
  std::string registry_path;  // resolved against the scenario file location
  std::string output_format = "text";      // text | records | csv
  std::string output_precision = "display";  // display | full
};

ScenarioFile load_scenario(const std::string& path);

}  // namespace dsol::scenario
