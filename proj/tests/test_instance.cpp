#include <doctest.h>

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "portsel/errors.hpp"
#include "portsel/instance.hpp"
#include "support/oracles.hpp"

using namespace portsel;

TEST_SUITE("instance") {
  TEST_CASE("single asset covariance is sd squared") {
    const Instance inst = parse_instance("1\n0.05 0.1\n1 1 1.0");
    REQUIRE(inst.size() == 1);
    CHECK(inst.covariance(0, 0) == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(inst.returns(0) == 0.05);
    CHECK(inst.min_frac(0) == kDefaultMinFraction);
    CHECK(inst.max_frac(0) == kDefaultMaxFraction);
    CHECK(inst.max_assets == 1);
  }

  TEST_CASE("off-diagonal covariance is rho sd_i sd_j, symmetric") {
    const Instance inst = parse_instance("2\n0.004 0.01\n0.005 0.02\n1 1 1.0\n1 2 0.5\n2 2 1.0");
    CHECK(inst.covariance(0, 1) == doctest::Approx(1.0e-4).epsilon(1e-14));
    CHECK(inst.covariance(1, 0) == inst.covariance(0, 1));
    CHECK(inst.covariance(1, 1) == doctest::Approx(4.0e-4).epsilon(1e-14));
  }

  TEST_CASE("whitespace layout is free-form") {
    const Instance inst = parse_instance("  2\n\n0.004   0.01 0.005\t0.02\n1 1 1.0 1 2 0.5\n 2 2 1.0\n\n\n");
    CHECK(inst.covariance(0, 1) == doctest::Approx(1.0e-4));
  }

  TEST_CASE("default cardinality is 10 on large instances") {
    const Instance inst = parse_instance(testing::port_text(testing::synthetic_instance(31, 3)));
    CHECK(inst.max_assets == 10);
  }

  TEST_CASE("malformed token reports its line") {
    try {
      parse_instance("2\n0.004 0.01\n0.005 x\n1 1 1\n1 2 0\n2 2 1\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }

  TEST_CASE("missing correlation pair is an incomplete matrix") {
    CHECK_THROWS_WITH_AS(parse_instance("2\n0.004 0.01\n0.005 0.02\n1 1 1.0\n2 2 1.0\n"),
                         doctest::Contains("incomplete correlation matrix"), ValidationError);
  }

  TEST_CASE("correlation magnitude above one is rejected, rounding noise is clamped") {
    CHECK_THROWS_AS(parse_instance("2\n0 0.1\n0 0.1\n1 1 1\n1 2 1.01\n2 2 1\n"), ValidationError);
    const Instance inst = parse_instance("2\n0 0.1\n0 0.1\n1 1 1\n1 2 1.0000000001\n2 2 1\n");
    CHECK(inst.covariance(0, 1) == doctest::Approx(0.01));
    CHECK(inst.covariance(0, 1) <= 0.1 * 1.0 * 0.1);
  }

  TEST_CASE("truncated or out-of-range triples") {
    CHECK_THROWS_AS(parse_instance("2\n0 0.1\n0 0.1\n1 1 1\n1 2\n"), ParseError);
    CHECK_THROWS_AS(parse_instance("2\n0 0.1\n0 0.1\n1 3 1\n"), ParseError);
    CHECK_THROWS_AS(parse_instance(""), ParseError);
    CHECK_THROWS_AS(parse_instance("2\n0 0.1\n"), ParseError);
  }

  TEST_CASE("serialize then parse reproduces the stored fields") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const Instance a = testing::synthetic_instance(12, seed);
      const Instance b = parse_instance(testing::port_text(a));
      REQUIRE(b.size() == a.size());
      for (int i = 0; i < a.size(); ++i) {
        CHECK(b.returns(i) == a.returns(i));
        for (int j = 0; j < a.size(); ++j)
          CHECK(b.covariance(i, j) == doctest::Approx(a.covariance(i, j)).epsilon(1e-13));
      }
    }
  }

  TEST_CASE("parsed covariance is symmetric and numerically PSD") {
    const Instance inst = parse_instance(testing::port_text(testing::synthetic_instance(40, 17)));
    CHECK(inst.covariance.isApprox(inst.covariance.transpose(), 0.0));
    Rng rng(99);
    for (int t = 0; t < 1000; ++t) {
      Eigen::VectorXd x(inst.size());
      for (int i = 0; i < inst.size(); ++i) x(i) = rng.uniform(-1.0, 1.0);
      x.normalize();
      CHECK(x.dot(inst.covariance * x) >= -1e-12);
    }
  }

  TEST_CASE("reference frontier parsing") {
    const UefReference uef = parse_uef("0.001 0.5\n0.002 0.6\n");
    REQUIRE(uef.points.size() == 2);
    CHECK(uef.points[0].ret == 0.001);
    CHECK(uef.points[0].variance == 0.5);
    CHECK(uef.points[1].ret == 0.002);
    CHECK(uef.points[1].variance == 0.6);

    const UefReference desc = parse_uef("0.003 0.7\n0.001 0.5\n0.002 0.6\n");
    CHECK(desc.points.front().ret == 0.001);
    CHECK(desc.points.back().ret == 0.003);
    CHECK(desc.mean_variance() == doctest::Approx(0.6));

    CHECK_THROWS_AS(parse_uef(""), ValidationError);
    CHECK_THROWS_AS(parse_uef("0.001 abc\n"), ParseError);
    CHECK_THROWS_AS(parse_uef("0.001 0.5\n0.001 0.6\n"), ValidationError);
    CHECK_THROWS_AS(parse_uef("0.001 0.0\n"), ValidationError);
  }

  TEST_CASE("return grid echoes the reference abscissae") {
    std::ostringstream text;
    std::vector<std::string> rs;
    for (int i = 1; i <= 10; ++i) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "%.3f", i * 0.001);
      rs.push_back(buf);
      text << rs.back() << ' ' << 0.1 * i << '\n';
    }
    const auto grid = return_grid(parse_uef(text.str()));
    REQUIRE(grid.size() == 10);
    for (int i = 0; i < 10; ++i) CHECK(grid[i] == std::stod(rs[i]));

    CHECK(return_grid(parse_uef("0.004 1e-3")).size() == 1);
    CHECK_THROWS_AS(return_grid(UefReference{}), ValidationError);
  }

  TEST_CASE("bound and cardinality validation") {
    Instance inst = testing::synthetic_instance(12, 4);
    CHECK_NOTHROW(validate(inst));
    CHECK(max_feasible_size(inst) == 10);

    // Ten assets at 0.1 each exactly fill the budget; eleven would not fit.
    set_uniform_bounds(inst, 0.1, 1.0);
    inst.max_assets = 12;
    CHECK(max_feasible_size(inst) == 10);

    // Maxima too small to reach one with at most k assets.
    set_uniform_bounds(inst, 0.0, 0.05);
    inst.max_assets = 10;
    CHECK_FALSE(max_feasible_size(inst).has_value());
    CHECK_THROWS_AS(validate(inst), ValidationError);

    set_uniform_bounds(inst, 0.3, 0.2);
    CHECK_THROWS_AS(validate(inst), ValidationError);

    inst = testing::synthetic_instance(5, 1);
    inst.covariance(0, 1) += 1e-9;
    CHECK_THROWS_AS(validate(inst), ValidationError);
  }
}
