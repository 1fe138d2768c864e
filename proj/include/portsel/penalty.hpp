#pragma once

#include "portsel/portfolio.hpp"
#include "portsel/random.hpp"

namespace portsel {

struct PenaltyConfig {
  double initial_constraint_weight = 1e4;  // w1 at the start of a run
  double objective_weight = 1.0;           // w2, fixed
  int satisfied_threshold = 20;            // K
  int violated_threshold = 1;              // H
  double factor_min = 1.5;
  double factor_max = 2.0;
  bool adaptive = true;
};

/// Shifting-penalty state: w1 shrinks after K consecutive feasible
/// iterations and grows after H consecutive infeasible ones, each time by a
/// random factor in [factor_min, factor_max].
struct PenaltyState {
  PenaltyWeights weights;
  int satisfied_streak = 0;
  int violated_streak = 0;
  PenaltyConfig config;

  explicit PenaltyState(const PenaltyConfig& cfg = {})
      : weights{cfg.initial_constraint_weight, cfg.objective_weight}, config(cfg) {}
};

PenaltyState update_penalty(PenaltyState state, bool violated, Rng& rng);

}  // namespace portsel
