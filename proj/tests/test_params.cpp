#include <doctest.h>

#include <cmath>

#include "ufl/common.hpp"
#include "ufl/params.hpp"

using namespace ufl;

TEST_SUITE("params") {

TEST_CASE("published constants") {
  ParamSet p = ParamSet::defaults();
  CHECK(p.K1 == 1.3025);
  CHECK(p.K2 == 1.3024);
  CHECK(p.K3 == 1.3023);
  CHECK(p.K4 == 1.3022);
  CHECK(p.K5 == 1.3021);
  CHECK(p.K6 == 1.3020);
  CHECK(p.gamma == 1.6774);
  CHECK(p.alpha == 5e-4);
  CHECK(p.M_cap == 5'000'000);
  CHECK(p.r_cone == 1e-8);
  CHECK(p.L_interval == 200'000'000);
  CHECK(p.eps1 == 1e-12);
  CHECK(p.eps2 == 5e-18);
  CHECK(p.eps3 == 3e-32);
  CHECK(p.eps4 == 2e-36);
  CHECK(p.eps5 == 2e-41);
  CHECK(p.eps6 == 3e-42);
  CHECK(p.eps7 == 2e-42);
  CHECK(p.eps8 == 2e-45);
  CHECK(p.delta == 3e-23);
  CHECK(p.delta_prime == 7e-32);
  CHECK(p.theta_range_lo == 0.2336);
  CHECK(p.theta_range_hi == 0.3613);
  p.check_invariants();
}

TEST_CASE("theta formula") {
  // (K6 + 1 - gamma) / (2 K6 + 2 - gamma) with K6 = 1.3020.
  CHECK(ParamSet::theta_for(1.6) == 0.23368841544607188);
  CHECK(ParamSet::theta_for(1.6774) == 0.21342171803457938);
  CHECK(ParamSet::defaults(1.6774).theta == 0.21342171803457938);
  CHECK(ParamSet::theta_for(1.9) ==
        doctest::Approx((1.3020 + 1 - 1.9) / (2 * 1.3020 + 2 - 1.9)).epsilon(1e-16));
  // Decreasing in gamma on (1, 2).
  CHECK(ParamSet::theta_for(1.7) < ParamSet::theta_for(1.6));
  CHECK(ParamSet::theta_for(1.99) < ParamSet::theta_for(1.7));
}

TEST_CASE("defaults rejects gamma outside (1, 2)") {
  CHECK_THROWS_AS(ParamSet::defaults(1.0), input_error);
  CHECK_THROWS_AS(ParamSet::defaults(2.0), input_error);
  CHECK_THROWS_AS(ParamSet::defaults(0.5), input_error);
  CHECK_THROWS_AS(ParamSet::inflated(2.3), input_error);
  CHECK_NOTHROW(ParamSet::defaults(1.999));
  CHECK_NOTHROW(ParamSet::defaults(1.001));
}

TEST_CASE("inflated ladder for epsilon-sensitive tests") {
  ParamSet p = ParamSet::inflated();
  CHECK(p.eps1 == 0.003);
  CHECK(p.eps2 == 0.002);
  CHECK(p.eps3 == 0.001);
  CHECK(p.delta == 0.0021);
  CHECK(p.delta_prime == 1e-06);
  CHECK(p.L_interval == 500);
  p.check_invariants();
}

TEST_CASE("phi_r closed form") {
  ParamSet p = ParamSet::defaults();
  CHECK(p.phi_r == doctest::Approx(std::acos(1 - 3 * p.r_cone + p.r_cone * p.r_cone))
                       .epsilon(1e-12));
  // The defining inequality 1 + x^2 + 2x cos(phi) <= (1 + (1-r)x)^2 holds
  // across [0, 2] at phi = phi_r and fails for a slightly smaller angle.
  double r = 1e-3;
  double phi = compute_phi_r(r);
  CHECK(phi == doctest::Approx(std::acos(1 - 3 * r + r * r)).epsilon(1e-12));
  bool holds_all = true;
  bool smaller_fails = false;
  for (int t = 0; t <= 2000; ++t) {
    double x = 2.0 * t / 2000;
    double lhs = 1 + x * x + 2 * x * std::cos(phi);
    double rhs = (1 + (1 - r) * x) * (1 + (1 - r) * x);
    if (lhs > rhs + 1e-9) holds_all = false;
    double lhs2 = 1 + x * x + 2 * x * std::cos(phi * 0.9);
    if (lhs2 > rhs + 1e-9) smaller_fails = true;
  }
  CHECK(holds_all);
  CHECK(smaller_fails);
}

TEST_CASE("gamma0 balance root") {
  ParamSet p = ParamSet::defaults();
  double g = p.gamma0;
  CHECK(g > 1.6);
  CHECK(g < 1.7);
  double e = std::exp(1.0);
  double resid = 1 / e + std::exp(-g) -
                 (g - 1) * (1 - 1 / e + (1 - p.eps5) * std::exp(-g));
  CHECK(std::abs(resid) < 1e-10);
  CHECK(compute_gamma0(p.eps5) == g);
}

TEST_CASE("check_invariants rejects broken ladders") {
  ParamSet p = ParamSet::defaults();
  p.K3 = 1.4;  // breaks K2 > K3
  CHECK_THROWS_AS(p.check_invariants(), input_error);

  ParamSet q = ParamSet::defaults();
  q.eps2 = 1.0;  // breaks eps1 > eps2
  CHECK_THROWS_AS(q.check_invariants(), input_error);

  ParamSet r = ParamSet::defaults();
  r.theta = 0.4;  // inconsistent with gamma
  CHECK_THROWS_AS(r.check_invariants(), input_error);
}

TEST_CASE("default grid spans 1.601..1.999") {
  auto grid = default_gamma_grid();
  REQUIRE(grid.size() == 399);
  CHECK(grid.front() == doctest::Approx(1.601).epsilon(1e-12));
  CHECK(grid.back() == doctest::Approx(1.999).epsilon(1e-12));
  for (std::size_t i = 1; i < grid.size(); ++i)
    CHECK(grid[i] - grid[i - 1] == doctest::Approx(0.001).epsilon(1e-9));
}

TEST_CASE("all thirteen conditions hold on the default grid") {
  ParamSet p = ParamSet::defaults();
  ConditionReport rep = validate_parameters(p, default_gamma_grid());
  REQUIRE(rep.conditions.size() == 13);
  for (const auto& c : rep.conditions) {
    CAPTURE(c.index);
    CAPTURE(c.name);
    CHECK(c.pass);
    // The level conditions are exactly tight by construction, so the worst
    // margin may sit an ulp below zero; anything visibly negative is a bug.
    CHECK(c.margin >= -1e-12);
  }
  CHECK(rep.all_pass());
  for (std::size_t i = 0; i < rep.conditions.size(); ++i)
    CHECK(rep.conditions[i].index == (int)i + 1);
}

TEST_CASE("inflated ladder breaks the interval-length condition") {
  ParamSet p = ParamSet::inflated();
  ConditionReport rep = validate_parameters(p, default_gamma_grid());
  REQUIRE(rep.conditions.size() == 13);
  CHECK_FALSE(rep.all_pass());
  CHECK_FALSE(rep.conditions[5].pass);  // condition 6: L lower bound
  CHECK(rep.conditions[5].margin < 0.0);
}

}  // TEST_SUITE
