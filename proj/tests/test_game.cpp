#include <doctest.h>

#include <cmath>
#include <string>

#include "ufl/augment.hpp"
#include "ufl/common.hpp"
#include "ufl/game.hpp"
#include "ufl/generators.hpp"
#include "ufl/lp.hpp"
#include "test_support.hpp"

using namespace ufl;

TEST_SUITE("game") {

TEST_CASE("threshold and step characteristic functions") {
  CharacteristicFunction t = CharacteristicFunction::threshold(0.3);
  CHECK(t.value_at(0.3) == 0.0);
  CHECK(t.value_at(0.3000001) == doctest::Approx(1.0 / 0.7).epsilon(1e-12));
  CHECK(t.value_at(1.0) == doctest::Approx(1.0 / 0.7).epsilon(1e-12));
  CHECK(t.integral() == doctest::Approx(1.0).epsilon(1e-12));
  t.validate();

  CharacteristicFunction s = CharacteristicFunction::steps({0.5, 1.0}, {0.5, 1.5});
  CHECK(s.value_at(0.25) == 0.5);
  CHECK(s.value_at(0.5) == 0.5);
  CHECK(s.value_at(0.75) == 1.5);
  CHECK(s.integral() == doctest::Approx(1.0).epsilon(1e-12));
  s.validate();

  CharacteristicFunction scaled = CharacteristicFunction::steps({0.5, 1.0}, {1.0, 3.0});
  CHECK(scaled.integral() == doctest::Approx(2.0).epsilon(1e-12));
  CharacteristicFunction norm = scaled.normalized();
  CHECK(norm.integral() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(norm.value_at(0.25) == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(CharacteristicFunction::steps({0.5, 1.0}, {1.5, 0.5}).validate(),
                  input_error);  // decreasing
  CHECK_THROWS_AS(CharacteristicFunction::steps({0.5, 0.9}, {0.5, 1.5}).validate(),
                  input_error);  // does not end at 1
  CHECK_THROWS_AS(CharacteristicFunction::threshold(1.5).validate(), input_error);
}

TEST_CASE("threshold converts to an equivalent step list") {
  CharacteristicFunction t = CharacteristicFunction::threshold(0.25);
  CharacteristicFunction s = t.as_steps();
  CHECK_FALSE(s.is_threshold);
  for (double p : {0.1, 0.25, 0.26, 0.5, 1.0})
    CHECK(s.value_at(p) == doctest::Approx(t.value_at(p)).epsilon(1e-15));
  CHECK(s.integral() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("production mixture masses") {
  GammaDistribution m = mu1();
  CHECK(m.kappa == 0.195583);
  REQUIRE(m.atoms.size() == 1);
  CHECK(m.atoms[0].first == 1.479311);
  CHECK(m.atoms[0].second == 0.503357);
  REQUIRE(m.uniform_pieces.size() == 1);
  CHECK(m.uniform_pieces[0].lo == 1.479311);
  CHECK(m.uniform_pieces[0].hi == 2.016569);
  // The uniform piece carries the remainder, written as the same difference
  // the library computes so the comparison is bitwise.
  CHECK(m.uniform_pieces[0].mass == 1.0 - 0.195583 - 0.503357);
  CHECK(m.uniform_pieces[0].mass == doctest::Approx(0.30106).epsilon(1e-15));
  CHECK(m.total_mass() == 1.0);
  m.validate();
}

TEST_CASE("derived mixture shifts mass to the unit atom") {
  const double eps7 = 1e-3;
  GammaDistribution m = mu2(eps7);
  CHECK(m.kappa == 0.195583);
  REQUIRE(m.atoms.size() == 2);
  CHECK(m.atoms[0].first == 1.479311);
  CHECK(m.atoms[0].second == doctest::Approx(0.503357 * (1 - eps7)).epsilon(1e-12));
  // The appended atom at 1 carries eps7 * (1 - kappa2).
  CHECK(m.atoms[1].first == 1.0);
  CHECK(m.atoms[1].second == doctest::Approx(eps7 * (1 - 0.195583)).epsilon(1e-12));
  REQUIRE(m.uniform_pieces.size() == 1);
  CHECK(m.uniform_pieces[0].mass == doctest::Approx(0.30106 * (1 - eps7)).epsilon(1e-12));
  CHECK(m.total_mass() == doctest::Approx(1.0).epsilon(1e-15));
  m.validate();
}

TEST_CASE("mixture validation rejects bad mass and support") {
  GammaDistribution bad;
  bad.kappa = 0.5;
  bad.atoms = {{1.5, 0.4}};
  CHECK_THROWS_AS(bad.validate(), input_error);  // total 0.9

  GammaDistribution low;
  low.kappa = 0.5;
  low.atoms = {{0.9, 0.5}};
  CHECK_THROWS_AS(low.validate(), input_error);  // gamma below 1
}

TEST_CASE("gamma sampling hits the published deterministic counts") {
  GammaDistribution m = mu2(1e-3);
  std::size_t one = 0, atom = 0, uniform = 0;
  for (int t = 0; t < 100000; ++t) {
    double u = (t + 0.5) / 100000.0;
    double g = m.sample_gamma(u);
    if (g == 1.0)
      ++one;
    else if (g == 1.479311)
      ++atom;
    else {
      ++uniform;
      CHECK(g > 1.479311);
      CHECK(g <= 2.016569);
    }
  }
  CHECK(one == 100);
  CHECK(atom == 62512);
  CHECK(uniform == 37388);
}

TEST_CASE("alpha closed form for threshold functions") {
  double gamma = 1.8, q = 0.3;
  CharacteristicFunction h = CharacteristicFunction::threshold(q);
  double expect = (std::exp(-q * gamma) - std::exp(-gamma)) / (1 - q) +
                  std::exp(-gamma) * (gamma + (3 - gamma) / (1 - q));
  CHECK(alpha_of(gamma, h) == doctest::Approx(expect).epsilon(1e-12));

  // With q above 1/gamma the boundary value drops to zero.
  double q2 = 0.8;
  CharacteristicFunction h2 = CharacteristicFunction::threshold(q2);
  double expect2 = (std::exp(-q2 * gamma) - std::exp(-gamma)) / (1 - q2) +
                   std::exp(-gamma) * gamma;
  CHECK(alpha_of(gamma, h2) == doctest::Approx(expect2).epsilon(1e-12));

  // The all-ones function gives 1 + 2 e^{-gamma}.
  CharacteristicFunction ones = CharacteristicFunction::threshold(0.0);
  CHECK(alpha_of(gamma, ones) == doctest::Approx(1 + 2 * std::exp(-gamma)).epsilon(1e-12));

  CHECK_THROWS_AS(alpha_of(0.99, ones), input_error);
}

TEST_CASE("step and threshold evaluations agree") {
  for (double q : {0.1, 0.4, 0.62}) {
    CharacteristicFunction t = CharacteristicFunction::threshold(q);
    CharacteristicFunction s = t.as_steps();
    for (double gamma : {1.0, 1.479311, 1.7, 2.016569})
      CHECK(alpha_of(gamma, s) == doctest::Approx(alpha_of(gamma, t)).epsilon(1e-12));
  }
}

TEST_CASE("primed alpha discounts only inside the window") {
  CharacteristicFunction h = CharacteristicFunction::threshold(0.2);
  double eps7 = 0.25;
  CHECK(alpha_prime_of(1.7, h, eps7) ==
        doctest::Approx(alpha_of(1.7, h) - eps7 * 1.7 * std::exp(-1.7)).epsilon(1e-13));
  CHECK(alpha_prime_of(1.5, h, eps7) == alpha_of(1.5, h));
  CHECK(alpha_prime_of(1.6, h, eps7) == alpha_of(1.6, h));
  CHECK(alpha_prime_of(2.0, h, eps7) == alpha_of(2.0, h));
  CHECK(alpha_prime_of(1.7, h, 0.0) == alpha_of(1.7, h));
}

TEST_CASE("game value of a pure-atom mixture is exact arithmetic") {
  GammaDistribution dist;
  dist.kappa = 0.3;
  dist.atoms = {{1.5, 0.7}};
  CharacteristicFunction ones = CharacteristicFunction::threshold(0.0);
  double gamma_payoff = 0.7 * 1.5 + 1.11 * 0.3;
  double alpha_payoff = 0.7 * (1 + 2 * std::exp(-1.5)) + 1.7764 * 0.3;
  CHECK(game_value(dist, ones, GameVariant::nu, 0.0) ==
        doctest::Approx(std::max(gamma_payoff, alpha_payoff)).epsilon(1e-12));
  CHECK(alpha_payoff > gamma_payoff);
}

TEST_CASE("worst-case ratio of the production mixture") {
  auto [value, q] = worst_case_ratio(mu1(), GameVariant::nu, 0.0, 1e-3);
  CHECK(value == 1.4879534934269998);
  CHECK(q == 0.0);
  // The gamma payoff is independent of q and binds everywhere, so the
  // adversary gains nothing over the trivial threshold.
  double gamma_payoff = 1.11 * 0.195583 + 1.479311 * 0.503357 +
                        0.30106 * 0.5 * (1.479311 + 2.016569);
  CHECK(value == doctest::Approx(gamma_payoff).epsilon(1e-12));
}

TEST_CASE("worst-case ratio of the derived mixture") {
  auto [value, q] = worst_case_ratio(mu2(1e-3), GameVariant::nu_prime, 1e-3, 1e-3);
  CHECK(value == 1.4884423541570504);
  CHECK(q == 0.6759899500025187);
}

TEST_CASE("grid step domain") {
  CHECK_THROWS_AS(worst_case_ratio(mu1(), GameVariant::nu, 0.0, 0.0), input_error);
  CHECK_THROWS_AS(worst_case_ratio(mu1(), GameVariant::nu, 0.0, 1e-2), input_error);
  CHECK_THROWS_AS(game_profile_tsv(mu1(), GameVariant::nu, 0.0, 1e-2), input_error);
}

TEST_CASE("profile dump covers the grid") {
  GammaDistribution dist;
  dist.kappa = 0.3;
  dist.atoms = {{1.5, 0.7}};
  std::string tsv = game_profile_tsv(dist, GameVariant::nu, 0.0, 1e-3);
  CHECK(tsv.rfind("q\tvalue\n", 0) == 0);
  std::size_t lines = 0;
  for (char c : tsv)
    if (c == '\n') ++lines;
  CHECK(lines == 1001);  // header + q = 0, 0.001, ..., 0.999
}

TEST_CASE("empirical distance profile of the triangle reduction is flat") {
  Instance inst = generate_hardness(testsupport::triangle_graph(), 1.0 / 3.0, 1.0);
  LpResult res = solve_relaxation(inst);
  AugmentedSolution aug = augment(res.primal, res.dec, 1.6774, inst);
  CharacteristicFunction h = h_empirical(aug, res.dec);
  h.validate();
  CHECK(h.value_at(0.25) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(h.value_at(0.9) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(h.value_at(1.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(h.integral() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("empirical profile is nondecreasing and normalized on random instances") {
  for (std::uint64_t seed : {2ull, 5ull, 9ull}) {
    Instance inst = testsupport::small_instance(seed);
    LpResult res = solve_relaxation(inst);
    AugmentedSolution aug = augment(res.primal, res.dec, 1.6774, inst);
    CharacteristicFunction h = h_empirical(aug, res.dec);
    h.validate();
    CHECK(h.integral() == doctest::Approx(1.0).epsilon(1e-9));
    double prev = 0.0;
    for (double p = 0.05; p <= 1.0; p += 0.05) {
      double v = h.value_at(p);
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
  }
}

}  // TEST_SUITE
