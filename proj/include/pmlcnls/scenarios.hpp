#pragma once

#include <string>
#include <vector>

#include "pmlcnls/config.hpp"

namespace pmlcnls {

/// lin-beta0, lin-beta05, lin-beta05-unstable, nl-beta0, nl-mixed, nl-pulse,
/// nl-mixed-longtime.
const std::vector<std::string>& builtin_scenario_names();

/// Paper-resolution defaults with desk-scale cell counts attached. Throws
/// ConfigError for an unknown name.
ScenarioConfig builtin_scenario(const std::string& name);

/// A built-in name or a path to an INI file.
ScenarioConfig resolve_scenario(const std::string& name_or_path);

}  // namespace pmlcnls
