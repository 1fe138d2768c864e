#include <doctest.h>

#include <cmath>
#include <sstream>

#include "portsel/frontier.hpp"
#include "portsel/presets.hpp"
#include "support/oracles.hpp"

using namespace portsel;

namespace {

FrontierPoint point(double target, double variance, double uef, bool feasible = true) {
  FrontierPoint p;
  p.target = target;
  p.feasible = feasible;
  p.variance = feasible ? variance : std::nan("");
  p.uef_variance = uef;
  p.loss_pct = feasible ? percent_loss(variance, uef) : std::nan("");
  return p;
}

// Two assets with no quantity limits: every frontier point has a closed form.
Instance two_assets() {
  Instance inst;
  inst.returns.resize(2);
  inst.returns << 0.002, 0.008;
  const double s0 = 0.03, s1 = 0.06, rho = 0.2;
  inst.covariance.resize(2, 2);
  inst.covariance << s0 * s0, rho * s0 * s1, rho * s0 * s1, s1 * s1;
  inst.min_frac = Eigen::VectorXd::Zero(2);
  inst.max_frac = Eigen::VectorXd::Ones(2);
  inst.max_assets = 2;
  return inst;
}

UefReference two_asset_frontier(const Instance& inst, int points) {
  double w = 0.0;
  testing::two_asset_min_variance(inst.covariance(0, 0), inst.covariance(1, 1), inst.covariance(0, 1), w);
  const double r0 = inst.returns(0), r1 = inst.returns(1);
  const double lo = w * r0 + (1 - w) * r1;
  UefReference uef;
  for (int i = 0; i < points; ++i) {
    const double target = lo + (r1 - lo) * i / points;
    const double x = (r1 - target) / (r1 - r0);
    Eigen::Vector2d v(x, 1 - x);
    uef.points.push_back({target, v.dot(inst.covariance * v)});
  }
  return uef;
}

SweepConfig quick_config(std::uint64_t seed = 1) {
  SweepConfig cfg;
  cfg.solver = tabu_ring({{Relation::Tid, 0.4}, {Relation::IdR, 0.05}});
  for (auto& r : cfg.solver.runners) {
    r.max_iterations = 2000;
    r.max_idle = 200;
  }
  cfg.solver.max_rounds = 3;
  cfg.trials = 2;
  cfg.initial_draws = 20;
  cfg.seed = seed;
  return cfg;
}

UefReference synthetic_reference(const Instance& inst, int points) {
  // Not an efficient frontier; only a grid with positive variances.
  UefReference uef;
  const double lo = inst.returns.minCoeff(), hi = inst.returns.maxCoeff();
  for (int i = 0; i < points; ++i) uef.points.push_back({lo + (hi - lo) * (i + 0.5) / points, 1e-4 * (i + 1)});
  return uef;
}

}  // namespace

TEST_SUITE("frontier") {
  TEST_CASE("average loss over feasible points") {
    CHECK(avg_percent_loss({point(0.1, 1.0, 1.0), point(0.2, 2.0, 2.0)}) == 0.0);
    CHECK(avg_percent_loss({point(0.1, 1.05, 1.0), point(0.2, 2.1, 2.0)}) == doctest::Approx(5.0));
    CHECK(avg_percent_loss({point(0.1, 1.05, 1.0), point(0.2, 0.0, 2.0, false)}) == doctest::Approx(5.0));
    CHECK_THROWS_AS(avg_percent_loss({point(0.1, 0.0, 1.0, false)}), std::domain_error);
    CHECK_THROWS_AS(avg_percent_loss({}), std::domain_error);
  }

  TEST_CASE("merging sweeps keeps the pointwise best") {
    const std::vector<FrontierPoint> a{point(0.1, 1.0, 0.9), point(0.2, 3.0, 2.0), point(0.3, 0, 3.0, false)};
    const std::vector<FrontierPoint> b{point(0.1, 2.0, 0.9), point(0.2, 2.5, 2.0), point(0.3, 4.0, 3.0)};
    const auto same = merge_acef({a});
    CHECK(same[0].variance == 1.0);
    CHECK(same[1].variance == 3.0);
    const auto m = merge_acef({a, b});
    CHECK(m[0].variance == 1.0);
    CHECK(m[1].variance == 2.5);
    CHECK(m[2].feasible);
    CHECK(m[2].variance == 4.0);
    CHECK(avg_percent_loss(m) <= std::min(avg_percent_loss(a), avg_percent_loss(b)));
    CHECK_THROWS_AS(merge_acef({a, {point(0.1, 1.0, 0.9)}}), std::invalid_argument);
    CHECK_THROWS_AS(merge_acef({a, {point(0.1, 1, 1), point(0.25, 1, 1), point(0.3, 1, 1)}}),
                    std::invalid_argument);
  }

  TEST_CASE("merged frontier dominates every run") {
    const Instance inst = testing::synthetic_instance(20, 3);
    const UefReference uef = synthetic_reference(inst, 5);
    std::vector<std::vector<FrontierPoint>> runs;
    for (std::uint64_t s = 1; s <= 3; ++s) runs.push_back(sweep(inst, uef, quick_config(s)));
    const auto merged = merge_acef(runs);
    for (const auto& run : runs)
      for (std::size_t i = 0; i < merged.size(); ++i)
        if (run[i].feasible) CHECK(merged[i].variance <= run[i].variance);
  }

  TEST_CASE("sweep is reproducible and independent of worker count") {
    const Instance inst = testing::synthetic_instance(25, 4);
    const UefReference uef = synthetic_reference(inst, 4);
    SweepConfig cfg = quick_config(9);
    const auto a = sweep(inst, uef, cfg);
    cfg.workers = 2;
    const auto b = sweep(inst, uef, cfg);
    std::ostringstream ca, cb;
    write_frontier_csv(a, ca);
    write_frontier_csv(b, cb);
    CHECK(ca.str() == cb.str());
  }

  TEST_CASE("two-asset frontier is recovered") {
    const Instance inst = two_assets();
    const UefReference uef = two_asset_frontier(inst, 8);
    const auto points = sweep(inst, uef, quick_config());
    REQUIRE(count_feasible(points) == 8);
    for (const auto& p : points) {
      CHECK(p.loss_pct >= -1e-9);
      CHECK(p.loss_pct < 0.1);
    }
  }

  TEST_CASE("recorded variances re-evaluate exactly") {
    const Instance inst = testing::synthetic_instance(30, 5);
    const UefReference uef = synthetic_reference(inst, 6);
    for (const auto& p : sweep(inst, uef, quick_config(3))) {
      REQUIRE_FALSE(check_invariants(p.portfolio, inst).has_value());
      if (!p.feasible) continue;
      CHECK(std::abs(p.variance - testing::dense_variance(p.portfolio, inst)) <= 1e-12 * p.variance);
      CHECK(testing::dense_return(p.portfolio, inst) >= p.target - 1e-15);
    }
  }

  TEST_CASE("loss is invariant under covariance scaling") {
    const Instance inst = testing::synthetic_instance(20, 6);
    const UefReference uef = synthetic_reference(inst, 4);
    Instance scaled = inst;
    scaled.covariance *= 4.0;
    UefReference scaled_uef = uef;
    for (auto& p : scaled_uef.points) p.variance *= 4.0;
    SweepConfig cfg = quick_config(5);
    SweepConfig scaled_cfg = cfg;
    for (auto& r : scaled_cfg.solver.runners) {
      r.penalty.initial_constraint_weight *= 4.0;
    }
    const auto a = sweep(inst, uef, cfg);
    const auto b = sweep(scaled, scaled_uef, scaled_cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      REQUIRE(a[i].feasible == b[i].feasible);
      if (!a[i].feasible) continue;
      CHECK(b[i].variance == 4.0 * a[i].variance);
      CHECK(b[i].loss_pct == a[i].loss_pct);
    }
  }

  TEST_CASE("sensitivity rows") {
    const Instance inst = two_assets();
    const UefReference uef = two_asset_frontier(inst, 4);
    const auto eps = sensitivity_study(inst, uef, SensitivityParameter::MinFraction, {0.0, 1.5}, quick_config());
    REQUIRE(eps.size() == 2);
    REQUIRE(eps[0].avg_loss.has_value());
    CHECK(std::abs(*eps[0].avg_loss) < 0.1);
    CHECK(eps[0].feasible_points == 4);
    CHECK_FALSE(eps[1].avg_loss.has_value());
    CHECK(eps[1].feasible_points == 0);

    const auto k = sensitivity_study(inst, uef, SensitivityParameter::MaxAssets, {0, 1, 2}, quick_config());
    CHECK_FALSE(k[0].avg_loss.has_value());
    REQUIRE(k[1].avg_loss.has_value());
    REQUIRE(k[2].avg_loss.has_value());
    CHECK(*k[2].avg_loss <= *k[1].avg_loss);
  }

  TEST_CASE("csv layout") {
    FrontierPoint a = point(0.0025, 1.5e-4, 1.25e-4);
    a.portfolio.holdings = {{0, 0.5}, {3, 0.5}};
    const FrontierPoint b = point(0.003, 0.0, 2e-4, false);
    std::ostringstream os;
    write_frontier_csv({a, b}, os);
    std::istringstream lines(os.str());
    std::string header, first, second;
    std::getline(lines, header);
    std::getline(lines, first);
    std::getline(lines, second);
    CHECK(header == "R,variance,uef_variance,loss_pct,num_assets,feasible");
    CHECK(first.rfind("0.0025", 0) == 0);
    CHECK(first.substr(first.size() - 4) == ",2,1");
    CHECK(second.find(",nan,") != std::string::npos);
    CHECK(second.substr(second.size() - 4) == ",0,0");
  }
}
