#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "portsel/instance.hpp"
#include "portsel/portfolio.hpp"
#include "portsel/random.hpp"

namespace portsel {

/// Neighborhood relations:
///  - IdR: increase/decrease one asset, replacing it when it drops below its minimum;
///  - IdId: increase/decrease/insert/delete one asset;
///  - Tid: transfer part of one asset's share to another, inserting or deleting as needed.
enum class Relation { IdR, IdId, Tid };

enum class Direction { Up, Down, Insert };

inline constexpr int kNoAsset = -1;

struct IdRMove {
  int asset;
  Direction dir;
  int replacement = kNoAsset;  // only meaningful for deleting Down moves

  friend bool operator==(const IdRMove&, const IdRMove&) = default;
};

struct IdIdMove {
  int asset;
  Direction dir;

  friend bool operator==(const IdIdMove&, const IdIdMove&) = default;
};

struct TidMove {
  int source;
  int dest;

  friend bool operator==(const TidMove&, const TidMove&) = default;
};

using Move = std::variant<IdRMove, IdIdMove, TidMove>;

Relation relation_of(const Move& m);
std::string to_string(Relation r);
std::string to_string(const Move& m);
Relation parse_relation(std::string_view name);

/// Step magnitude drawn uniformly from [base - spread, base + spread],
/// redrawn until it falls in (0, 1).
struct StepPolicy {
  double base = 0.3;
  double spread = 0.0;
};

double draw_step(const StepPolicy& policy, Rng& rng);

/// Every move whose structural preconditions hold (asset membership,
/// cardinality for insertions). Repair feasibility is not checked.
std::vector<Move> candidate_moves(const Portfolio& p, Relation relation, double step, const Instance& inst);

/// Moves from candidate_moves whose application succeeds.
std::vector<Move> enumerate(const Portfolio& p, Relation relation, double step, const Instance& inst);

std::optional<Portfolio> try_apply(const Portfolio& p, const Move& m, double step, const Instance& inst);

/// Throws MoveRejected when the move is inapplicable.
Portfolio apply(const Portfolio& p, const Move& m, double step, const Instance& inst);

/// c_i = sum_j sigma_ij x_j over held j, for every asset i.
Eigen::VectorXd linear_form(const Portfolio& p, const Instance& inst);

/// Amount and side effects of a transfer move on a given state.
struct Transfer {
  int source_pos;
  int dest_pos;  // -1 when the destination is not held
  double amount;
  bool drains_source;
  bool needs_repair;  // destination would exceed its maximum
};

std::optional<Transfer> plan_transfer(const Portfolio& p, const TidMove& m, double step, const Instance& inst);

struct Candidate {
  Move move;
  Objective objective;
};

/// Applicable neighbors with their objective terms. Transfers are costed
/// incrementally from the linear form (O(1) each); the other relations are
/// re-evaluated from scratch.
std::vector<Candidate> evaluate_neighborhood(const Portfolio& p, const Objective& current, Relation relation,
                                             double step, const Instance& inst);

/// f(p (x) m) - f(p). Throws MoveRejected when the move is inapplicable.
double delta_evaluate(const Portfolio& p, const Move& m, double step, const Instance& inst, double target,
                      const PenaltyWeights& w);

/// One uniformly drawn candidate move, or nullopt when none exists.
std::optional<Move> random_move(const Portfolio& p, Relation relation, double step, const Instance& inst,
                                Rng& rng);

/// IdR/IdId: same first asset, different direction. Tid: endpoints swapped.
/// Comparing moves of different relations is a contract violation.
bool is_inverse(const Move& a, const Move& b);

}  // namespace portsel
