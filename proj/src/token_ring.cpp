#include "portsel/token_ring.hpp"

#include <stdexcept>

namespace portsel {

TokenRing single_runner(const RunnerConfig& cfg) { return TokenRing{{cfg}, 1, 1}; }

void validate(const TokenRing& ring) {
  if (ring.runners.empty()) throw std::invalid_argument("token ring needs at least one runner");
  if (ring.max_idle_rounds < 1) throw std::invalid_argument("token ring needs at least one idle round");
  if (ring.max_rounds < 0) throw std::invalid_argument("token ring round cap must be non-negative");
  for (const auto& r : ring.runners) validate(r);
}

RunResult run_token_ring(const TokenRing& ring, const Portfolio& s0, const Instance& inst, double target, Rng& rng,
                         const RingObserver& observer) {
  validate(ring);
  RunResult global;
  global.best = s0;
  global.best_cost = evaluate(s0, inst, target, PenaltyWeights{ring.runners.front().penalty.initial_constraint_weight,
                                                               ring.runners.front().penalty.objective_weight});
  global.final_state = s0;

  Portfolio start = s0;
  int idle_rounds = 0;
  for (int round = 0; idle_rounds < ring.max_idle_rounds && (ring.max_rounds == 0 || round < ring.max_rounds);
       ++round) {
    bool improved = false;
    for (int r = 0; r < static_cast<int>(ring.runners.size()); ++r) {
      RunResult res = run_runner(start, ring.runners[r], inst, target, rng);
      if (observer.on_run) observer.on_run(round, r, start, res);
      global.iterations += res.iterations;
      global.final_state = res.final_state;
      if (lex_less(res.best_cost, global.best_cost)) {
        global.best = res.best;
        global.best_cost = res.best_cost;
        improved = true;
      }
      start = res.best;
    }
    idle_rounds = improved ? 0 : idle_rounds + 1;
  }
  return global;
}

}  // namespace portsel
