#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "portsel/token_ring.hpp"

namespace portsel {

/// Named solver configurations: every single-runner row (fixed and random
/// step) of the solver comparison and every token-ring combination.
struct Preset {
  std::string name;
  std::string description;
  TokenRing solver;
};

const std::vector<Preset>& presets();

std::optional<Preset> find_preset(std::string_view name);

/// Presets whose name starts with `group` followed by '-'.
std::vector<Preset> preset_group(std::string_view group);

/// Tabu search with the default tenures and idle limit.
RunnerConfig tabu_runner(Relation relation, double base, double spread);

/// Ring of tabu runners with random steps (spread equal to base).
TokenRing tabu_ring(const std::vector<std::pair<Relation, double>>& steps);

}  // namespace portsel
