#include <doctest.h>

#include "portsel/presets.hpp"
#include "portsel/token_ring.hpp"
#include "support/oracles.hpp"

using namespace portsel;

namespace {

bool same_state(const Portfolio& a, const Portfolio& b) {
  if (a.size() != b.size()) return false;
  for (const auto& h : a.holdings)
    if (!b.holds(h.asset) || b.fraction_of(h.asset) != h.fraction) return false;
  return true;
}

}  // namespace

TEST_SUITE("token_ring") {
  TEST_CASE("single runner ring equals the runner") {
    const Instance inst = testing::synthetic_instance(30, 2);
    const double target = 0.006;
    RunnerConfig cfg;
    cfg.max_iterations = 800;
    Rng setup(1);
    const Portfolio s0 = random_portfolio(inst, 10, setup);
    Rng a(44), b(44);
    const RunResult ring = run_token_ring(single_runner(cfg), s0, inst, target, a);
    const RunResult alone = run_tabu(s0, cfg, inst, target, b);
    CHECK(same_state(ring.best, alone.best));
    CHECK(ring.best_cost.variance == alone.best_cost.variance);
    CHECK(ring.iterations == alone.iterations);
  }

  TEST_CASE("ring stops after the idle round limit without improvement") {
    const Instance inst = testing::synthetic_instance(10, 3);
    RunnerConfig cfg;
    cfg.max_iterations = 0;  // never moves
    TokenRing ring{{cfg, cfg}, 3, 0};
    int runs = 0;
    Rng rng(1);
    const Portfolio s0 = random_portfolio(inst, 4, rng);
    const RunResult r = run_token_ring(ring, s0, inst, 0.005, rng,
                                       {[&](int, int, const Portfolio&, const RunResult&) { ++runs; }});
    CHECK(runs == 3 * 2);
    CHECK(same_state(r.best, s0));
  }

  TEST_CASE("round cap bounds the number of rounds") {
    const Instance inst = testing::synthetic_instance(20, 4);
    TokenRing ring = tabu_ring({{Relation::Tid, 0.4}, {Relation::IdR, 0.05}});
    for (auto& r : ring.runners) r.max_iterations = 50;
    ring.max_rounds = 2;
    int last_round = -1;
    Rng rng(2);
    run_token_ring(ring, random_portfolio(inst, 8, rng), inst, 0.006, rng,
                   {[&](int round, int, const Portfolio&, const RunResult&) { last_round = round; }});
    CHECK(last_round <= 1);
  }

  TEST_CASE("each runner starts from its predecessor's best and the global best never worsens") {
    const Instance inst = testing::synthetic_instance(40, 5);
    const double target = 0.007;
    TokenRing ring = tabu_ring({{Relation::Tid, 0.4}, {Relation::IdR, 0.05}, {Relation::IdId, 0.1}});
    for (auto& r : ring.runners) {
      r.max_iterations = 300;
      r.max_idle = 60;
    }
    ring.max_rounds = 6;
    Rng rng(3);
    const Portfolio s0 = random_portfolio(inst, 10, rng);
    std::optional<Portfolio> previous_best;
    CostBreakdown global = evaluate(s0, inst, target, {});
    std::vector<CostBreakdown> history;
    const RunResult result =
        run_token_ring(ring, s0, inst, target, rng, {[&](int, int, const Portfolio& start, const RunResult& r) {
                         if (previous_best) CHECK(same_state(start, *previous_best));
                         else CHECK(same_state(start, s0));
                         previous_best = r.best;
                         if (lex_less(r.best_cost, global)) global = r.best_cost;
                         history.push_back(global);
                       }});
    for (std::size_t i = 1; i < history.size(); ++i) CHECK_FALSE(lex_less(history[i - 1], history[i]));
    CHECK(result.best_cost.variance == doctest::Approx(global.variance).epsilon(1e-12));
  }

  TEST_CASE("ring validation") {
    CHECK_THROWS_AS(validate(TokenRing{}), std::invalid_argument);
    TokenRing ring = single_runner(RunnerConfig{});
    ring.max_idle_rounds = 0;
    CHECK_THROWS_AS(validate(ring), std::invalid_argument);
  }
}
