#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "portsel/neighborhood.hpp"
#include "portsel/penalty.hpp"
#include "portsel/portfolio.hpp"
#include "portsel/random.hpp"

namespace portsel {

enum class Technique { Tabu, HillClimbing, Annealing };
enum class SelectionMode { Random, Steepest };

std::string to_string(Technique t);
Technique parse_technique(std::string_view name);

struct RunnerConfig {
  Technique technique = Technique::Tabu;
  Relation relation = Relation::Tid;
  StepPolicy step{0.3, 0.3};
  int max_idle = 1000;
  long max_iterations = 50000;
  PenaltyConfig penalty;

  // Tabu search.
  int tenure_min = 10;
  int tenure_max = 25;

  // Hill climbing.
  SelectionMode selection = SelectionMode::Random;

  // Simulated annealing. A non-positive start temperature means
  // `start_temperature_factor` times the initial weighted cost.
  double start_temperature = 0.0;
  double start_temperature_factor = 10.0;
  double cooling = 0.95;
  int iterations_per_temperature = 100;
  double frozen_ratio = 1e-5;
};

/// Throws std::invalid_argument on out-of-range settings.
void validate(const RunnerConfig& cfg);

struct RunResult {
  Portfolio best;
  CostBreakdown best_cost;  // weighted at the final penalty weights
  Portfolio final_state;
  long iterations = 0;

  bool feasible() const { return best_cost.feasible(); }
};

/// Called after every accepted move with the new current state.
struct TraceEvent {
  long iteration;
  const Move& move;
  double step;
  const Portfolio& state;
  const CostBreakdown& cost;
};
using TraceFn = std::function<void(const TraceEvent&)>;

/// Best-improvement tabu search. Inverses of recent moves are forbidden
/// unless they reach the cost of the best state found so far; stops after
/// `max_idle` iterations without improving the best state.
RunResult run_tabu(const Portfolio& s0, const RunnerConfig& cfg, const Instance& inst, double target, Rng& rng,
                   const TraceFn& trace = {});

/// Accepts only improving or sideways moves, either a random one per
/// iteration or the best of the neighborhood.
RunResult run_hill_climbing(const Portfolio& s0, const RunnerConfig& cfg, const Instance& inst, double target,
                            Rng& rng, const TraceFn& trace = {});

/// Metropolis acceptance with geometric cooling.
RunResult run_simulated_annealing(const Portfolio& s0, const RunnerConfig& cfg, const Instance& inst, double target,
                                  Rng& rng, const TraceFn& trace = {});

/// Dispatches on cfg.technique.
RunResult run_runner(const Portfolio& s0, const RunnerConfig& cfg, const Instance& inst, double target, Rng& rng,
                     const TraceFn& trace = {});

double metropolis_probability(double delta, double temperature);

}  // namespace portsel
