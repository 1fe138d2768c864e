#include "portsel/runners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "portsel/tabu_list.hpp"

namespace portsel {

namespace {

// Independent random streams, so that runners sharing a decision rule
// consume identical step and penalty sequences.
struct Streams {
  Rng step;
  Rng move;
  Rng penalty;
  Rng aux;

  explicit Streams(Rng& parent) : step(parent.next()), move(parent.next()), penalty(parent.next()), aux(parent.next()) {}
};

// State shared by all runners: the current state, the shifting penalty and
// the best state seen, compared lexicographically on (shortfall, variance).
class Search {
 public:
  Search(const Portfolio& s0, const RunnerConfig& cfg, const Instance& inst, double target)
      : inst_(inst), target_(target), penalty_(cfg.penalty), current_(s0), best_(s0) {
    objective_ = evaluate_objective(current_, inst_);
    best_objective_ = objective_;
    best_cost_ = cost(objective_, target_, weights());
  }

  const PenaltyWeights& weights() const { return penalty_.weights; }
  const Portfolio& current() const { return current_; }
  const Objective& objective() const { return objective_; }
  double weighted(const Objective& obj) const { return cost(obj, target_, weights()).weighted; }
  double current_weighted() const { return weighted(objective_); }
  double best_weighted() const { return weighted(best_objective_); }
  int idle() const { return idle_; }

  void accept(Portfolio next, long iteration, const Move& move, double step, const TraceFn& trace) {
    current_ = std::move(next);
    // Full re-evaluation keeps incremental rounding from accumulating.
    objective_ = evaluate_objective(current_, inst_);
    if (trace) {
      const auto c = cost(objective_, target_, weights());
      trace(TraceEvent{iteration, move, step, current_, c});
    }
  }

  // End-of-iteration bookkeeping: penalty update and best tracking.
  void finish_iteration(Rng& rng) {
    penalty_ = update_penalty(penalty_, shortfall(objective_.expected_return, target_) > 0.0, rng);
    const auto c = cost(objective_, target_, weights());
    if (lex_less(c, best_cost_)) {
      best_ = current_;
      best_cost_ = c;
      best_objective_ = objective_;
      idle_ = 0;
    } else {
      ++idle_;
    }
  }

  RunResult result(long iterations) const {
    RunResult r;
    r.best = best_;
    r.best_cost = cost(evaluate_objective(best_, inst_), target_, weights());
    r.final_state = current_;
    r.iterations = iterations;
    return r;
  }

 private:
  const Instance& inst_;
  double target_;
  PenaltyState penalty_;
  Portfolio current_;
  Objective objective_;
  Portfolio best_;
  CostBreakdown best_cost_;
  Objective best_objective_;
  int idle_ = 0;
};

}  // namespace

std::string to_string(Technique t) {
  switch (t) {
    case Technique::Tabu: return "TS";
    case Technique::HillClimbing: return "HC";
    case Technique::Annealing: return "SA";
  }
  return "?";
}

Technique parse_technique(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "ts" || lower == "tabu") return Technique::Tabu;
  if (lower == "hc" || lower == "hill-climbing") return Technique::HillClimbing;
  if (lower == "sa" || lower == "annealing") return Technique::Annealing;
  throw std::invalid_argument("unknown technique '" + std::string(name) + "'");
}

void validate(const RunnerConfig& cfg) {
  if (cfg.max_idle < 1) throw std::invalid_argument("max idle iterations must be at least 1");
  if (cfg.max_iterations < 0) throw std::invalid_argument("iteration cap must be non-negative");
  if (cfg.tenure_min < 1 || cfg.tenure_min > cfg.tenure_max)
    throw std::invalid_argument("tabu tenures must satisfy 1 <= min <= max");
  if (!(cfg.step.base > 0.0 && cfg.step.base < 1.0)) throw std::invalid_argument("step base must lie in (0, 1)");
  if (cfg.step.spread < 0.0) throw std::invalid_argument("step spread must be non-negative");
  if (!(cfg.cooling > 0.0 && cfg.cooling <= 1.0)) throw std::invalid_argument("cooling rate must lie in (0, 1]");
  if (cfg.iterations_per_temperature < 1) throw std::invalid_argument("iterations per temperature must be positive");
  if (cfg.penalty.satisfied_threshold < 1 || cfg.penalty.violated_threshold < 1)
    throw std::invalid_argument("penalty thresholds must be positive");
  if (!(cfg.penalty.initial_constraint_weight > 0.0)) throw std::invalid_argument("initial w1 must be positive");
}

double metropolis_probability(double delta, double temperature) {
  if (delta <= 0.0) return 1.0;
  if (!(temperature > 0.0)) return 0.0;
  return std::exp(-delta / temperature);
}

RunResult run_tabu(const Portfolio& s0, const RunnerConfig& cfg, const Instance& inst, double target, Rng& rng,
                   const TraceFn& trace) {
  validate(cfg);
  Streams streams(rng);
  Search search(s0, cfg, inst, target);
  TabuList tabu;

  long it = 0;
  while (it < cfg.max_iterations && search.idle() < cfg.max_idle) {
    ++it;
    const double step = draw_step(cfg.step, streams.step);
    const auto candidates = evaluate_neighborhood(search.current(), search.objective(), cfg.relation, step, inst);
    if (candidates.empty()) {
      search.finish_iteration(streams.penalty);
      continue;
    }

    const double aspiration = search.best_weighted();
    const Candidate* chosen = nullptr;
    double chosen_cost = std::numeric_limits<double>::infinity();
    for (const auto& c : candidates) {
      const double f = search.weighted(c.objective);
      if (f < chosen_cost && (f <= aspiration || !tabu.is_tabu(c.move, it))) {
        chosen = &c;
        chosen_cost = f;
      }
    }
    if (!chosen) {
      // Every neighbor is forbidden: take the one released soonest.
      long release = std::numeric_limits<long>::max();
      for (const auto& c : candidates) {
        const long until = tabu.blocked_until(c.move, it).value_or(it);
        const double f = search.weighted(c.objective);
        if (until < release || (until == release && f < chosen_cost)) {
          chosen = &c;
          release = until;
          chosen_cost = f;
        }
      }
    }

    auto next = try_apply(search.current(), chosen->move, step, inst);
    if (next) {
      search.accept(std::move(*next), it, chosen->move, step, trace);
      tabu.insert(chosen->move, it, streams.aux.between(cfg.tenure_min, cfg.tenure_max));
    }
    tabu.purge(it);
    search.finish_iteration(streams.penalty);
  }
  return search.result(it);
}

RunResult run_hill_climbing(const Portfolio& s0, const RunnerConfig& cfg, const Instance& inst, double target,
                            Rng& rng, const TraceFn& trace) {
  validate(cfg);
  Streams streams(rng);
  Search search(s0, cfg, inst, target);

  long it = 0;
  while (it < cfg.max_iterations && search.idle() < cfg.max_idle) {
    ++it;
    const double step = draw_step(cfg.step, streams.step);
    if (cfg.selection == SelectionMode::Steepest) {
      const auto candidates = evaluate_neighborhood(search.current(), search.objective(), cfg.relation, step, inst);
      const Candidate* chosen = nullptr;
      double chosen_cost = std::numeric_limits<double>::infinity();
      for (const auto& c : candidates) {
        const double f = search.weighted(c.objective);
        if (f < chosen_cost) {
          chosen = &c;
          chosen_cost = f;
        }
      }
      if (chosen && chosen_cost <= search.current_weighted()) {
        if (auto next = try_apply(search.current(), chosen->move, step, inst))
          search.accept(std::move(*next), it, chosen->move, step, trace);
      }
    } else if (auto move = random_move(search.current(), cfg.relation, step, inst, streams.move)) {
      if (auto next = try_apply(search.current(), *move, step, inst)) {
        const double f = search.weighted(evaluate_objective(*next, inst));
        if (f <= search.current_weighted()) search.accept(std::move(*next), it, *move, step, trace);
      }
    }
    search.finish_iteration(streams.penalty);
  }
  return search.result(it);
}

RunResult run_simulated_annealing(const Portfolio& s0, const RunnerConfig& cfg, const Instance& inst, double target,
                                  Rng& rng, const TraceFn& trace) {
  validate(cfg);
  Streams streams(rng);
  Search search(s0, cfg, inst, target);

  const double t0 = cfg.start_temperature > 0.0 ? cfg.start_temperature
                                                 : cfg.start_temperature_factor * search.current_weighted();
  const double frozen = t0 * cfg.frozen_ratio;
  double temperature = t0;
  int at_temperature = 0;

  long it = 0;
  while (it < cfg.max_iterations && temperature > frozen) {
    ++it;
    const double step = draw_step(cfg.step, streams.step);
    if (auto move = random_move(search.current(), cfg.relation, step, inst, streams.move)) {
      if (auto next = try_apply(search.current(), *move, step, inst)) {
        const double delta = search.weighted(evaluate_objective(*next, inst)) - search.current_weighted();
        bool accept = delta <= 0.0;
        if (!accept) accept = streams.aux.uniform() < metropolis_probability(delta, temperature);
        if (accept) search.accept(std::move(*next), it, *move, step, trace);
      }
    }
    search.finish_iteration(streams.penalty);
    if (++at_temperature >= cfg.iterations_per_temperature) {
      temperature *= cfg.cooling;
      at_temperature = 0;
    }
  }
  return search.result(it);
}

RunResult run_runner(const Portfolio& s0, const RunnerConfig& cfg, const Instance& inst, double target, Rng& rng,
                     const TraceFn& trace) {
  switch (cfg.technique) {
    case Technique::Tabu: return run_tabu(s0, cfg, inst, target, rng, trace);
    case Technique::HillClimbing: return run_hill_climbing(s0, cfg, inst, target, rng, trace);
    case Technique::Annealing: return run_simulated_annealing(s0, cfg, inst, target, rng, trace);
  }
  throw std::invalid_argument("unknown technique");
}

}  // namespace portsel
