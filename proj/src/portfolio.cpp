#include "portsel/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "portsel/errors.hpp"
#include "portsel/format.hpp"

namespace portsel {

namespace {

constexpr double kMassTolerance = 1e-12;
constexpr int kSubsetAttempts = 1000;

// Spreads `mass` over the given assets on top of their minima, in proportion
// to `weight`, honoring the maxima. Returns false if the maxima cannot absorb
// the mass or no asset is left to carry it.
bool spread_mass(std::vector<Holding>& holdings, const std::vector<int>& positions, std::vector<double> weight,
                 double mass, const Instance& inst) {
  std::vector<bool> clamped(holdings.size(), false);
  for (std::size_t round = 0; round <= positions.size(); ++round) {
    double total_weight = 0.0;
    for (std::size_t t = 0; t < positions.size(); ++t)
      if (!clamped[positions[t]]) total_weight += weight[t];
    if (mass < -kMassTolerance) return false;
    if (total_weight <= 0.0) {
      if (mass <= kMassTolerance) {
        for (int pos : positions)
          if (!clamped[pos]) holdings[pos].fraction = inst.min_frac(holdings[pos].asset);
        return true;
      }
      // Nothing above the minima to scale: split the mass evenly instead.
      for (std::size_t t = 0; t < positions.size(); ++t)
        if (!clamped[positions[t]]) {
          weight[t] = 1.0;
          total_weight += 1.0;
        }
      if (total_weight <= 0.0) return false;
    }
    const double scale = std::max(0.0, mass) / total_weight;
    bool new_clamp = false;
    for (std::size_t t = 0; t < positions.size(); ++t) {
      const int pos = positions[t];
      if (clamped[pos]) continue;
      const int a = holdings[pos].asset;
      const double v = inst.min_frac(a) + scale * weight[t];
      if (v > inst.max_frac(a)) {
        clamped[pos] = true;
        holdings[pos].fraction = inst.max_frac(a);
        mass -= inst.max_frac(a) - inst.min_frac(a);
        new_clamp = true;
      } else {
        holdings[pos].fraction = v;
      }
    }
    if (!new_clamp) return true;
  }
  return false;
}

}  // namespace

int Portfolio::find(int asset) const {
  for (int t = 0; t < size(); ++t)
    if (holdings[t].asset == asset) return t;
  return -1;
}

double Portfolio::fraction_of(int asset) const {
  const int pos = find(asset);
  return pos < 0 ? 0.0 : holdings[pos].fraction;
}

double Portfolio::total() const {
  double s = 0.0;
  for (const auto& h : holdings) s += h.fraction;
  return s;
}

Eigen::VectorXd to_dense(const Portfolio& p, int n) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (const auto& h : p.holdings) x(h.asset) = h.fraction;
  return x;
}

Objective evaluate_objective(const Portfolio& p, const Instance& inst) {
  Objective obj;
  const auto& h = p.holdings;
  for (std::size_t a = 0; a < h.size(); ++a) {
    obj.expected_return += inst.returns(h[a].asset) * h[a].fraction;
    double row = 0.5 * inst.covariance(h[a].asset, h[a].asset) * h[a].fraction;
    for (std::size_t b = a + 1; b < h.size(); ++b) row += inst.covariance(h[a].asset, h[b].asset) * h[b].fraction;
    obj.variance += 2.0 * h[a].fraction * row;
  }
  return obj;
}

double shortfall(double expected_return, double target) { return std::max(0.0, target - expected_return); }

CostBreakdown cost(const Objective& obj, double target, const PenaltyWeights& w) {
  CostBreakdown c;
  c.return_violation = shortfall(obj.expected_return, target);
  c.variance = obj.variance;
  c.weighted = w.constraint * c.return_violation + w.objective * c.variance;
  return c;
}

CostBreakdown evaluate(const Portfolio& p, const Instance& inst, double target, const PenaltyWeights& w) {
  return cost(evaluate_objective(p, inst), target, w);
}

bool renormalize_in_place(std::vector<Holding>& holdings, int pinned_pos, const Instance& inst) {
  const double pinned = pinned_pos >= 0 ? holdings[pinned_pos].fraction : 0.0;
  std::vector<int> others;
  std::vector<double> surplus;
  double minima = 0.0;
  for (int t = 0; t < static_cast<int>(holdings.size()); ++t) {
    if (t == pinned_pos) continue;
    const double lo = inst.min_frac(holdings[t].asset);
    others.push_back(t);
    surplus.push_back(std::max(0.0, holdings[t].fraction - lo));
    minima += lo;
  }
  const double free_mass = 1.0 - pinned - minima;
  return spread_mass(holdings, others, std::move(surplus), free_mass, inst);
}

Portfolio renormalize(Portfolio p, int pinned, const Instance& inst) {
  const int pos = p.find(pinned);
  if (pos < 0) throw MoveRejected("pinned asset " + std::to_string(pinned + 1) + " is not held");
  if (!renormalize_in_place(p.holdings, pos, inst))
    throw RepairError("no feasible renormalization keeps asset " + std::to_string(pinned + 1) + " at " +
                      format_double(p.holdings[pos].fraction));
  return p;
}

Portfolio random_portfolio(const Instance& inst, int size, Rng& rng) {
  const int n = inst.size();
  if (size < 1 || size > n || size > inst.max_assets)
    throw InfeasibleError("portfolio size " + std::to_string(size) + " outside [1, min(k, n)]");

  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (int attempt = 0; attempt < kSubsetAttempts; ++attempt) {
    // Partial Fisher-Yates: the first `size` entries form a uniform subset.
    for (int t = 0; t < size; ++t) std::swap(pool[t], pool[t + static_cast<int>(rng.index(n - t))]);

    double minima = 0.0, maxima = 0.0;
    for (int t = 0; t < size; ++t) {
      minima += inst.min_frac(pool[t]);
      maxima += inst.max_frac(pool[t]);
    }
    if (minima > 1.0 + kMassTolerance || maxima < 1.0 - kMassTolerance) continue;

    Portfolio p;
    std::vector<int> positions(size);
    std::vector<double> weight(size);
    for (int t = 0; t < size; ++t) {
      p.holdings.push_back({pool[t], inst.min_frac(pool[t])});
      positions[t] = t;
      // Exponential spacings give a uniform point on the simplex.
      weight[t] = -std::log1p(-rng.uniform());
    }
    if (!spread_mass(p.holdings, positions, std::move(weight), 1.0 - minima, inst)) continue;
    if (size == 1) p.holdings.front().fraction = 1.0;
    return p;
  }
  throw InfeasibleError("no feasible subset of " + std::to_string(size) + " assets found");
}

Portfolio best_of_random(const Instance& inst, int size, double target, int count, Rng& rng,
                         const PenaltyWeights& w) {
  if (count < 1) throw std::invalid_argument("best_of_random needs at least one draw");
  Portfolio best = random_portfolio(inst, size, rng);
  double best_cost = evaluate(best, inst, target, w).weighted;
  for (int d = 1; d < count; ++d) {
    Portfolio p = random_portfolio(inst, size, rng);
    const double c = evaluate(p, inst, target, w).weighted;
    if (c < best_cost) {
      best_cost = c;
      best = std::move(p);
    }
  }
  return best;
}

std::optional<std::string> check_invariants(const Portfolio& p, const Instance& inst, double tol) {
  if (p.holdings.empty()) return "empty portfolio";
  if (p.size() > inst.max_assets)
    return "holds " + std::to_string(p.size()) + " assets, limit " + std::to_string(inst.max_assets);
  std::vector<bool> seen(inst.size(), false);
  for (const auto& h : p.holdings) {
    if (h.asset < 0 || h.asset >= inst.size()) return "asset index out of range";
    if (seen[h.asset]) return "duplicate asset " + std::to_string(h.asset + 1);
    seen[h.asset] = true;
    if (h.fraction < inst.min_frac(h.asset) - tol || h.fraction > inst.max_frac(h.asset) + tol)
      return "asset " + std::to_string(h.asset + 1) + " fraction " + format_double(h.fraction) + " outside bounds";
  }
  if (std::abs(p.total() - 1.0) > tol) return "fractions sum to " + format_double(p.total());
  return std::nullopt;
}

}  // namespace portsel
