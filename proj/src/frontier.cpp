#include "portsel/frontier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "portsel/errors.hpp"
#include "portsel/format.hpp"
#include "portsel/random.hpp"

namespace portsel {

namespace {

// Runs `count` jobs on up to `workers` threads. Jobs write to their own slot,
// so the outcome does not depend on scheduling.
template <class Job>
void run_parallel(int count, int workers, Job job) {
  if (workers <= 1 || count <= 1) {
    for (int t = 0; t < count; ++t) job(t);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::jthread> pool;
  const int threads = std::min(workers, count);
  std::vector<std::exception_ptr> errors(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int t = next++; t < count; t = next++) job(t);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  pool.clear();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

double percent_loss(double variance, double uef_variance) {
  return 100.0 * (variance - uef_variance) / uef_variance;
}

std::vector<FrontierPoint> sweep(const Instance& inst, const UefReference& uef, const SweepConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("sweep needs at least one trial per point");
  validate(cfg.solver);
  const auto grid = return_grid(uef);
  int size = 0;
  if (cfg.initial_size) {
    size = *cfg.initial_size;
  } else {
    const auto m = max_feasible_size(inst);
    if (!m) throw InfeasibleError("no feasible portfolio size for this instance");
    size = *m;
  }
  const PenaltyWeights initial{cfg.solver.runners.front().penalty.initial_constraint_weight,
                               cfg.solver.runners.front().penalty.objective_weight};

  std::vector<FrontierPoint> points;
  points.reserve(grid.size());
  std::optional<Portfolio> previous;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const double target = grid[idx];
    std::vector<RunResult> results(cfg.trials);
    run_parallel(cfg.trials, cfg.workers, [&](int trial) {
      Rng rng(derive_seed(cfg.seed, idx, static_cast<std::uint64_t>(trial)));
      const bool warm = trial == 0 && cfg.warm_start && previous.has_value();
      const Portfolio start = warm ? *previous : best_of_random(inst, size, target, cfg.initial_draws, rng, initial);
      results[trial] = run_token_ring(cfg.solver, start, inst, target, rng);
    });

    FrontierPoint pt;
    pt.target = target;
    pt.uef_variance = uef.points[idx].variance;
    const RunResult* best = nullptr;
    for (const auto& r : results) {
      if (!best || lex_less(r.best_cost, best->best_cost)) best = &r;
    }
    pt.portfolio = best->best;
    const Objective obj = evaluate_objective(pt.portfolio, inst);
    pt.feasible = shortfall(obj.expected_return, target) == 0.0;
    pt.variance = pt.feasible ? obj.variance : std::numeric_limits<double>::quiet_NaN();
    pt.loss_pct = pt.feasible ? percent_loss(pt.variance, pt.uef_variance) : std::numeric_limits<double>::quiet_NaN();
    previous = pt.portfolio;
    points.push_back(std::move(pt));
  }
  return points;
}

int count_feasible(const std::vector<FrontierPoint>& points) {
  return static_cast<int>(std::count_if(points.begin(), points.end(), [](const auto& p) { return p.feasible; }));
}

double avg_percent_loss(const std::vector<FrontierPoint>& points) {
  double sum = 0.0;
  int count = 0;
  for (const auto& p : points) {
    if (!p.feasible) continue;
    sum += p.loss_pct;
    ++count;
  }
  if (count == 0) throw std::domain_error("average loss undefined: no feasible frontier point");
  return sum / count;
}

std::vector<FrontierPoint> merge_acef(const std::vector<std::vector<FrontierPoint>>& runs) {
  if (runs.empty()) throw std::invalid_argument("merge_acef needs at least one run");
  std::vector<FrontierPoint> merged = runs.front();
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].size() != merged.size()) throw std::invalid_argument("merge_acef: runs use different grids");
    for (std::size_t i = 0; i < merged.size(); ++i) {
      const auto& cand = runs[r][i];
      if (cand.target != merged[i].target) throw std::invalid_argument("merge_acef: runs use different grids");
      if (cand.feasible && (!merged[i].feasible || cand.variance < merged[i].variance)) merged[i] = cand;
    }
  }
  return merged;
}

std::vector<SensitivityRow> sensitivity_study(const Instance& inst, const UefReference& uef,
                                              SensitivityParameter parameter, const std::vector<double>& values,
                                              const SweepConfig& cfg) {
  if (values.empty()) throw std::invalid_argument("sensitivity study needs at least one value");
  std::vector<SensitivityRow> rows;
  for (double v : values) {
    Instance variant = inst;
    if (parameter == SensitivityParameter::MaxAssets) {
      variant.max_assets = static_cast<int>(std::lround(v));
    } else {
      variant.max_assets = std::min(kMinFractionStudyCardinality, variant.size());
      variant.min_frac.setConstant(v);
    }
    SensitivityRow row{v, std::nullopt, 0};
    try {
      validate(variant);
      const auto points = sweep(variant, uef, cfg);
      row.feasible_points = count_feasible(points);
      if (row.feasible_points > 0) row.avg_loss = avg_percent_loss(points);
    } catch (const ValidationError&) {
    } catch (const InfeasibleError&) {
    }
    rows.push_back(row);
  }
  return rows;
}

void write_frontier_csv(const std::vector<FrontierPoint>& points, std::ostream& out) {
  out << "R,variance,uef_variance,loss_pct,num_assets,feasible\n";
  for (const auto& p : points) {
    out << format_double(p.target) << ',' << (p.feasible ? format_double(p.variance) : "nan") << ','
        << format_double(p.uef_variance) << ',' << (p.feasible ? format_double(p.loss_pct) : "nan") << ','
        << p.portfolio.size() << ',' << (p.feasible ? 1 : 0) << '\n';
  }
}

}  // namespace portsel
