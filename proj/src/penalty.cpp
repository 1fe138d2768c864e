#include "portsel/penalty.hpp"

namespace portsel {

PenaltyState update_penalty(PenaltyState state, bool violated, Rng& rng) {
  if (!state.config.adaptive) return state;
  if (violated) {
    state.satisfied_streak = 0;
    if (++state.violated_streak >= state.config.violated_threshold) {
      state.weights.constraint *= rng.uniform(state.config.factor_min, state.config.factor_max);
      state.violated_streak = 0;
    }
  } else {
    state.violated_streak = 0;
    if (++state.satisfied_streak >= state.config.satisfied_threshold) {
      state.weights.constraint /= rng.uniform(state.config.factor_min, state.config.factor_max);
      state.satisfied_streak = 0;
    }
  }
  return state;
}

}  // namespace portsel
