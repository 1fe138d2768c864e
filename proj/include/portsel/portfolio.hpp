#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "portsel/instance.hpp"
#include "portsel/random.hpp"

namespace portsel {

struct Holding {
  int asset;
  double fraction;
};

/// Sparse portfolio: the held assets and their fractions. Assets not listed
/// hold zero. Every state produced by this library keeps the fractions
/// summing to one, each fraction inside its asset's bounds, and at most k
/// distinct assets; only the return constraint is left to the cost function.
struct Portfolio {
  std::vector<Holding> holdings;

  int size() const { return static_cast<int>(holdings.size()); }

  /// Position of an asset in holdings, or -1.
  int find(int asset) const;

  bool holds(int asset) const { return find(asset) >= 0; }

  double fraction_of(int asset) const;

  double total() const;
};

/// Dense n-vector of fractions.
Eigen::VectorXd to_dense(const Portfolio& p, int n);

/// Raw objective terms of a state: expected return and variance.
struct Objective {
  double expected_return = 0.0;
  double variance = 0.0;
};

struct PenaltyWeights {
  double constraint = 1e4;  // w1
  double objective = 1.0;   // w2
};

/// f1 (return shortfall), f2 (variance) and f = w1*f1 + w2*f2.
struct CostBreakdown {
  double return_violation = 0.0;
  double variance = 0.0;
  double weighted = 0.0;

  bool feasible() const { return return_violation == 0.0; }
};

Objective evaluate_objective(const Portfolio& p, const Instance& inst);

double shortfall(double expected_return, double target);

CostBreakdown cost(const Objective& obj, double target, const PenaltyWeights& w);

CostBreakdown evaluate(const Portfolio& p, const Instance& inst, double target, const PenaltyWeights& w);

/// Lexicographic order on (shortfall, variance): feasibility first.
inline bool lex_less(const CostBreakdown& a, const CostBreakdown& b) {
  if (a.return_violation != b.return_violation) return a.return_violation < b.return_violation;
  return a.variance < b.variance;
}

/// Rescales the surplus above the minimum of every asset other than
/// `pinned` so the fractions sum to one again, then clamps any fraction
/// pushed over its maximum and spreads the excess over the rest. The pinned
/// fraction is left untouched. Throws RepairError when no feasible
/// rescaling exists.
Portfolio renormalize(Portfolio p, int pinned, const Instance& inst);

/// In-place variant on a holdings vector; `pinned_pos` indexes holdings
/// (-1 rescales every holding).
/// Returns false (with `holdings` unspecified) when repair is infeasible.
bool renormalize_in_place(std::vector<Holding>& holdings, int pinned_pos, const Instance& inst);

/// Uniformly chosen `size` distinct assets, each at its minimum plus a
/// uniform random split of the remaining mass, clamped to the maxima.
Portfolio random_portfolio(const Instance& inst, int size, Rng& rng);

/// The draw with the lowest weighted cost among `count` random portfolios.
Portfolio best_of_random(const Instance& inst, int size, double target, int count, Rng& rng,
                         const PenaltyWeights& w = {});

/// Describes the first violated state invariant, if any.
std::optional<std::string> check_invariants(const Portfolio& p, const Instance& inst, double tol = 1e-9);

}  // namespace portsel
