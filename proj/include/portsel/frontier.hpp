#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "portsel/instance.hpp"
#include "portsel/portfolio.hpp"
#include "portsel/token_ring.hpp"

namespace portsel {

/// Best result found for one target return of the sweep.
struct FrontierPoint {
  double target = 0.0;
  bool feasible = false;
  double variance = 0.0;  // meaningful only when feasible
  Portfolio portfolio;
  double uef_variance = 0.0;
  double loss_pct = 0.0;  // 100 (variance - uef) / uef
};

double percent_loss(double variance, double uef_variance);

struct SweepConfig {
  int trials = 4;
  TokenRing solver;
  std::uint64_t seed = 1;
  bool warm_start = true;
  int initial_draws = 100;
  int workers = 1;
  /// Size of random initial portfolios; defaults to the largest feasible
  /// size not exceeding k.
  std::optional<int> initial_size;
};

/// Solves every target return of the reference grid with `trials`
/// independent runs and keeps the feasible run with the least variance.
/// With warm starts, the first trial of each point after the first starts
/// from the previous point's best portfolio.
std::vector<FrontierPoint> sweep(const Instance& inst, const UefReference& uef, const SweepConfig& cfg);

/// Mean loss over feasible points. Throws std::domain_error if none.
double avg_percent_loss(const std::vector<FrontierPoint>& points);

int count_feasible(const std::vector<FrontierPoint>& points);

/// Pointwise best feasible result across sweeps over the same grid.
std::vector<FrontierPoint> merge_acef(const std::vector<std::vector<FrontierPoint>>& runs);

enum class SensitivityParameter { MaxAssets, MinFraction };

struct SensitivityRow {
  double value;
  std::optional<double> avg_loss;  // nullopt when the setting is infeasible
  int feasible_points = 0;
};

/// The cardinality used while varying the minimum fraction.
inline constexpr int kMinFractionStudyCardinality = 20;

std::vector<SensitivityRow> sensitivity_study(const Instance& inst, const UefReference& uef,
                                              SensitivityParameter parameter, const std::vector<double>& values,
                                              const SweepConfig& cfg);

void write_frontier_csv(const std::vector<FrontierPoint>& points, std::ostream& out);

}  // namespace portsel
