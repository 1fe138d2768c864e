#pragma once

#include <vector>

#include "portsel/runners.hpp"

namespace portsel {

/// Runners executed in circular order, each starting from the best state
/// found by its predecessor. Stops after `max_idle_rounds` consecutive full
/// rounds with no strict improvement of the global best, or after
/// `max_rounds` rounds when that cap is positive.
struct TokenRing {
  std::vector<RunnerConfig> runners;
  int max_idle_rounds = 3;
  int max_rounds = 0;
};

/// A ring holding one runner executed exactly once.
TokenRing single_runner(const RunnerConfig& cfg);

void validate(const TokenRing& ring);

struct RingObserver {
  /// Called after each component run with its index in the ring, the state
  /// it started from and its result.
  std::function<void(int round, int runner, const Portfolio& start, const RunResult& result)> on_run;
};

RunResult run_token_ring(const TokenRing& ring, const Portfolio& s0, const Instance& inst, double target, Rng& rng,
                         const RingObserver& observer = {});

}  // namespace portsel
