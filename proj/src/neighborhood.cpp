#include "portsel/neighborhood.hpp"

#include <algorithm>
#include <stdexcept>

#include "portsel/errors.hpp"

namespace portsel {

namespace {

constexpr double kBoundSlack = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const char* direction_name(Direction d) {
  switch (d) {
    case Direction::Up: return "up";
    case Direction::Down: return "down";
    case Direction::Insert: return "insert";
  }
  return "?";
}

std::optional<Portfolio> apply_increase(const Portfolio& p, int asset, double step, const Instance& inst) {
  const int pos = p.find(asset);
  if (pos < 0) return std::nullopt;
  double others_min = 0.0;
  for (const auto& h : p.holdings)
    if (h.asset != asset) others_min += inst.min_frac(h.asset);
  const double x = p.holdings[pos].fraction;
  const double target = std::min({x * (1.0 + step), inst.max_frac(asset), 1.0 - others_min});
  if (!(target > x)) return std::nullopt;
  Portfolio next = p;
  next.holdings[pos].fraction = target;
  if (!renormalize_in_place(next.holdings, pos, inst)) return std::nullopt;
  return next;
}

// Shared by IdR and IdId. `replacement` is inserted at its minimum when the
// asset drops out; kNoAsset deletes without replacing.
std::optional<Portfolio> apply_decrease(const Portfolio& p, int asset, int replacement, double step,
                                        const Instance& inst) {
  const int pos = p.find(asset);
  if (pos < 0) return std::nullopt;
  const double reduced = p.holdings[pos].fraction * (1.0 - step);
  Portfolio next = p;
  if (reduced >= inst.min_frac(asset)) {
    next.holdings[pos].fraction = reduced;
    if (!renormalize_in_place(next.holdings, pos, inst)) return std::nullopt;
    return next;
  }
  next.holdings.erase(next.holdings.begin() + pos);
  if (replacement != kNoAsset) {
    if (replacement == asset || p.holds(replacement)) return std::nullopt;
    next.holdings.push_back({replacement, inst.min_frac(replacement)});
    if (!renormalize_in_place(next.holdings, next.size() - 1, inst)) return std::nullopt;
    return next;
  }
  if (next.holdings.empty()) return std::nullopt;
  if (!renormalize_in_place(next.holdings, -1, inst)) return std::nullopt;
  return next;
}

std::optional<Portfolio> apply_insert(const Portfolio& p, int asset, const Instance& inst) {
  if (p.holds(asset) || p.size() >= inst.max_assets) return std::nullopt;
  Portfolio next = p;
  next.holdings.push_back({asset, inst.min_frac(asset)});
  if (!renormalize_in_place(next.holdings, next.size() - 1, inst)) return std::nullopt;
  return next;
}

std::optional<Portfolio> apply_transfer(const Portfolio& p, const TidMove& m, double step, const Instance& inst) {
  const auto plan = plan_transfer(p, m, step, inst);
  if (!plan) return std::nullopt;
  Portfolio next = p;
  int dest = plan->dest_pos;
  if (dest >= 0) {
    next.holdings[dest].fraction += plan->amount;
  } else {
    next.holdings.push_back({m.dest, plan->amount});
    dest = next.size() - 1;
  }
  if (plan->drains_source) {
    next.holdings.erase(next.holdings.begin() + plan->source_pos);
    if (dest > plan->source_pos) --dest;
  } else {
    next.holdings[plan->source_pos].fraction -= plan->amount;
  }
  if (plan->needs_repair) {
    next.holdings[dest].fraction = inst.max_frac(m.dest);
    if (!renormalize_in_place(next.holdings, dest, inst)) return std::nullopt;
  }
  return next;
}

}  // namespace

Relation relation_of(const Move& m) {
  return std::visit(Overloaded{[](const IdRMove&) { return Relation::IdR; },
                               [](const IdIdMove&) { return Relation::IdId; },
                               [](const TidMove&) { return Relation::Tid; }},
                    m);
}

std::string to_string(Relation r) {
  switch (r) {
    case Relation::IdR: return "idR";
    case Relation::IdId: return "idID";
    case Relation::Tid: return "TID";
  }
  return "?";
}

Relation parse_relation(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "idr") return Relation::IdR;
  if (lower == "idid") return Relation::IdId;
  if (lower == "tid") return Relation::Tid;
  throw std::invalid_argument("unknown neighborhood relation '" + std::string(name) + "'");
}

std::string to_string(const Move& m) {
  return std::visit(
      Overloaded{[](const IdRMove& x) {
                   std::string s = "idR<" + std::to_string(x.asset + 1) + "," + direction_name(x.dir);
                   if (x.replacement != kNoAsset) s += "," + std::to_string(x.replacement + 1);
                   return s + ">";
                 },
                 [](const IdIdMove& x) {
                   return "idID<" + std::to_string(x.asset + 1) + "," + direction_name(x.dir) + ">";
                 },
                 [](const TidMove& x) {
                   return "TID<" + std::to_string(x.source + 1) + "," + std::to_string(x.dest + 1) + ">";
                 }},
      m);
}

double draw_step(const StepPolicy& policy, Rng& rng) {
  if (policy.spread <= 0.0) return policy.base;
  const double lo = policy.base - policy.spread, hi = policy.base + policy.spread;
  if (hi <= 0.0 || lo >= 1.0) throw std::invalid_argument("step interval does not intersect (0, 1)");
  for (;;) {
    const double s = rng.uniform(lo, hi);
    if (s > 0.0 && s < 1.0) return s;
  }
}

std::optional<Transfer> plan_transfer(const Portfolio& p, const TidMove& m, double step, const Instance& inst) {
  if (m.source == m.dest) return std::nullopt;
  const int src = p.find(m.source);
  if (src < 0) return std::nullopt;
  const int dst = p.find(m.dest);
  const double x = p.holdings[src].fraction;

  Transfer t{src, dst, step * x, false, false};
  if (dst < 0 && t.amount < inst.min_frac(m.dest)) t.amount = inst.min_frac(m.dest);
  const double remaining = x - t.amount;
  if (remaining < inst.min_frac(m.source) || remaining <= 0.0) {
    t.amount = x;
    t.drains_source = true;
  }
  if (dst < 0) {
    if (!t.drains_source && p.size() >= inst.max_assets) return std::nullopt;
    if (t.amount < inst.min_frac(m.dest)) return std::nullopt;
  }
  const double current = dst < 0 ? 0.0 : p.holdings[dst].fraction;
  if (current >= inst.max_frac(m.dest) - kBoundSlack) return std::nullopt;
  t.needs_repair = current + t.amount > inst.max_frac(m.dest);
  return t;
}

std::vector<Move> candidate_moves(const Portfolio& p, Relation relation, double step, const Instance& inst) {
  const int n = inst.size();
  std::vector<bool> held(n, false);
  for (const auto& h : p.holdings) held[h.asset] = true;

  std::vector<Move> moves;
  switch (relation) {
    case Relation::IdR:
      for (const auto& h : p.holdings) {
        moves.emplace_back(IdRMove{h.asset, Direction::Up});
        if (h.fraction * (1.0 - step) < inst.min_frac(h.asset)) {
          for (int j = 0; j < n; ++j)
            if (!held[j]) moves.emplace_back(IdRMove{h.asset, Direction::Down, j});
        } else {
          moves.emplace_back(IdRMove{h.asset, Direction::Down});
        }
      }
      break;
    case Relation::IdId:
      for (const auto& h : p.holdings) {
        moves.emplace_back(IdIdMove{h.asset, Direction::Up});
        moves.emplace_back(IdIdMove{h.asset, Direction::Down});
      }
      if (p.size() < inst.max_assets)
        for (int j = 0; j < n; ++j)
          if (!held[j]) moves.emplace_back(IdIdMove{j, Direction::Insert});
      break;
    case Relation::Tid:
      for (const auto& h : p.holdings)
        for (int j = 0; j < n; ++j)
          if (j != h.asset) moves.emplace_back(TidMove{h.asset, j});
      break;
  }
  return moves;
}

std::optional<Portfolio> try_apply(const Portfolio& p, const Move& m, double step, const Instance& inst) {
  return std::visit(
      Overloaded{[&](const IdRMove& x) -> std::optional<Portfolio> {
                   if (x.dir == Direction::Up) return apply_increase(p, x.asset, step, inst);
                   if (x.dir != Direction::Down) return std::nullopt;
                   const int pos = p.find(x.asset);
                   if (pos < 0) return std::nullopt;
                   const bool deletes = p.holdings[pos].fraction * (1.0 - step) < inst.min_frac(x.asset);
                   // A deleting decrease needs a replacement; a non-deleting one carries none.
                   if (deletes != (x.replacement != kNoAsset)) return std::nullopt;
                   return apply_decrease(p, x.asset, x.replacement, step, inst);
                 },
                 [&](const IdIdMove& x) -> std::optional<Portfolio> {
                   switch (x.dir) {
                     case Direction::Up: return apply_increase(p, x.asset, step, inst);
                     case Direction::Down: return apply_decrease(p, x.asset, kNoAsset, step, inst);
                     case Direction::Insert: return apply_insert(p, x.asset, inst);
                   }
                   return std::nullopt;
                 },
                 [&](const TidMove& x) { return apply_transfer(p, x, step, inst); }},
      m);
}

Portfolio apply(const Portfolio& p, const Move& m, double step, const Instance& inst) {
  auto next = try_apply(p, m, step, inst);
  if (!next) throw MoveRejected("move " + to_string(m) + " is not applicable");
  return std::move(*next);
}

std::vector<Move> enumerate(const Portfolio& p, Relation relation, double step, const Instance& inst) {
  std::vector<Move> out;
  for (auto& c : evaluate_neighborhood(p, evaluate_objective(p, inst), relation, step, inst))
    out.push_back(std::move(c.move));
  return out;
}

Eigen::VectorXd linear_form(const Portfolio& p, const Instance& inst) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(inst.size());
  for (const auto& h : p.holdings) c.noalias() += h.fraction * inst.covariance.col(h.asset);
  return c;
}

std::vector<Candidate> evaluate_neighborhood(const Portfolio& p, const Objective& current, Relation relation,
                                             double step, const Instance& inst) {
  std::vector<Candidate> out;
  if (relation != Relation::Tid) {
    for (auto& m : candidate_moves(p, relation, step, inst))
      if (auto next = try_apply(p, m, step, inst)) out.push_back({std::move(m), evaluate_objective(*next, inst)});
    return out;
  }

  const Eigen::VectorXd c = linear_form(p, inst);
  const int n = inst.size();
  out.reserve(static_cast<std::size_t>(p.size()) * (n - 1));
  for (const auto& h : p.holdings) {
    const int i = h.asset;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const TidMove m{i, j};
      const auto plan = plan_transfer(p, m, step, inst);
      if (!plan) continue;
      if (plan->needs_repair) {
        if (auto next = apply_transfer(p, m, step, inst)) out.push_back({m, evaluate_objective(*next, inst)});
        continue;
      }
      const double t = plan->amount;
      const auto& cov = inst.covariance;
      Objective obj;
      obj.expected_return = current.expected_return + t * (inst.returns(j) - inst.returns(i));
      obj.variance = current.variance + 2.0 * t * (c(j) - c(i)) + t * t * (cov(i, i) - 2.0 * cov(i, j) + cov(j, j));
      out.push_back({m, obj});
    }
  }
  return out;
}

double delta_evaluate(const Portfolio& p, const Move& m, double step, const Instance& inst, double target,
                      const PenaltyWeights& w) {
  const Objective before = evaluate_objective(p, inst);
  Objective after;
  if (const auto* tid = std::get_if<TidMove>(&m)) {
    const auto plan = plan_transfer(p, *tid, step, inst);
    if (!plan) throw MoveRejected("move " + to_string(m) + " is not applicable");
    if (plan->needs_repair) {
      after = evaluate_objective(apply(p, m, step, inst), inst);
    } else {
      const int i = tid->source, j = tid->dest;
      const double t = plan->amount;
      const auto& cov = inst.covariance;
      const Eigen::VectorXd c = linear_form(p, inst);
      after.expected_return = before.expected_return + t * (inst.returns(j) - inst.returns(i));
      after.variance = before.variance + 2.0 * t * (c(j) - c(i)) + t * t * (cov(i, i) - 2.0 * cov(i, j) + cov(j, j));
    }
  } else {
    after = evaluate_objective(apply(p, m, step, inst), inst);
  }
  return cost(after, target, w).weighted - cost(before, target, w).weighted;
}

std::optional<Move> random_move(const Portfolio& p, Relation relation, double step, const Instance& inst,
                                Rng& rng) {
  if (relation == Relation::Tid) {
    const int n = inst.size();
    if (p.holdings.empty() || n < 2) return std::nullopt;
    const int i = p.holdings[rng.index(p.holdings.size())].asset;
    int j = static_cast<int>(rng.index(n - 1));
    if (j >= i) ++j;
    return TidMove{i, j};
  }
  auto moves = candidate_moves(p, relation, step, inst);
  if (moves.empty()) return std::nullopt;
  return moves[rng.index(moves.size())];
}

bool is_inverse(const Move& a, const Move& b) {
  if (a.index() != b.index()) throw std::invalid_argument("is_inverse: moves belong to different relations");
  return std::visit(
      Overloaded{[&](const IdRMove& x) {
                   const auto& y = std::get<IdRMove>(b);
                   return x.asset == y.asset && x.dir != y.dir;
                 },
                 [&](const IdIdMove& x) {
                   const auto& y = std::get<IdIdMove>(b);
                   return x.asset == y.asset && x.dir != y.dir;
                 },
                 [&](const TidMove& x) {
                   const auto& y = std::get<TidMove>(b);
                   return x.source == y.dest && x.dest == y.source;
                 }},
      a);
}

}  // namespace portsel
