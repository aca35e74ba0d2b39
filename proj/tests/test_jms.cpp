#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ufl/jms.hpp"
#include "ufl/lp.hpp"
#include "ufl/rounding.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace ufl;

namespace {

Instance line_instance(std::vector<std::pair<double, double>> facilities,
                       std::vector<double> clients) {
  Instance inst;
  inst.dim = 1;
  int id = 0;
  for (auto [cost, x] : facilities) inst.facilities.push_back({id++, cost, {x}});
  id = 0;
  for (double x : clients) inst.clients.push_back({id++, {x}});
  return inst;
}

}  // namespace

TEST_SUITE("jms") {

TEST_CASE("single facility opens when contributions cover its cost") {
  Instance inst = line_instance({{2.0, 0.0}}, {3.0, -5.0});
  JmsState st = jms_run(inst);
  // Budgets rise until (t-3) + (t-5) = 2, i.e. t = 5.
  CHECK(st.time == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(st.alpha[0] == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(st.alpha[1] == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(st.open[0] == 1);

  RoundedSolution sol = jms_solve(inst);
  CHECK(sol.total_cost == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(sol.facility_cost == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(sol.connection_cost == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("cheap facility opens earlier") {
  Instance inst = line_instance({{1.0, 0.0}}, {1.0, 2.0});
  JmsState st = jms_run(inst);
  CHECK(st.time == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(st.alpha[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(st.alpha[1] == doctest::Approx(2.0).epsilon(1e-12));
  RoundedSolution sol = jms_solve(inst);
  CHECK(sol.total_cost == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("zero-cost facility opens at first touch") {
  Instance inst = line_instance({{0.0, 0.0}}, {3.0});
  JmsState st = jms_run(inst);
  CHECK(st.time == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(st.alpha[0] == doctest::Approx(3.0).epsilon(1e-12));
  RoundedSolution sol = jms_solve(inst);
  CHECK(sol.total_cost == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("two facilities split the clients") {
  Instance inst = line_instance({{0.5, 0.0}, {1.0, 6.0}}, {1.0, 5.0});
  JmsState st = jms_run(inst);
  CHECK(st.alpha[0] == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(st.alpha[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(st.open[0] == 1);
  CHECK(st.open[1] == 1);

  RoundedSolution sol = jms_solve(inst);
  CHECK(sol.total_cost == doctest::Approx(3.5).epsilon(1e-12));
  CHECK(sol.assignment[0] == 0);
  CHECK(sol.assignment[1] == 1);
  CHECK(solution_dump_tsv(sol) ==
        "open\t0\nopen\t1\n"
        "assign\t0\t0\nassign\t1\t1\n"
        "facility_cost\t1.5\nconnection_cost\t2\ntotal_cost\t3.5\n");
}

TEST_CASE("budgets account for the run cost") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Instance inst = testsupport::small_instance(seed);
    JmsState st = jms_run(inst);
    double alpha_sum = 0.0;
    for (double a : st.alpha) alpha_sum += a;
    double run_cost = 0.0;
    for (std::size_t i = 0; i < inst.num_facilities(); ++i)
      if (st.open[i]) run_cost += inst.facilities[i].open_cost;
    for (std::size_t j = 0; j < inst.num_clients(); ++j) {
      REQUIRE(st.connected[j] >= 0);
      run_cost += inst.dist((std::size_t)st.connected[j], j);
    }
    // Budgets cover the cost of the run's own connections exactly.
    CHECK(alpha_sum == doctest::Approx(run_cost).epsilon(1e-9));

    // The returned solution reassigns to the nearest open facility, which
    // can only reduce the cost.
    RoundedSolution sol = jms_solve(inst);
    CHECK(sol.total_cost <= run_cost + 1e-9);
    for (std::size_t j = 0; j < inst.num_clients(); ++j) {
      std::size_t a = sol.assignment[j];
      for (std::size_t i = 0; i < inst.num_facilities(); ++i)
        if (std::find(sol.open_parents.begin(), sol.open_parents.end(), i) !=
            sol.open_parents.end())
          CHECK(inst.dist(a, j) <= inst.dist(i, j) + 1e-12);
    }
  }
}

TEST_CASE("solution sits between the relaxation and the exhaustive optimum times the bound") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    Instance inst = testsupport::small_instance(seed);
    double opt = testoracle::flat_subset_opt(inst);
    RoundedSolution sol = jms_solve(inst);
    CHECK(sol.total_cost >= opt - 1e-9);
    // 1.61 is the known worst-case factor of the dual-ascent rule.
    CHECK(sol.total_cost <= 1.61 * opt + 1e-9);
  }
}

TEST_CASE("add-only baseline is feasible and never beats the optimum") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    Instance inst = testsupport::small_instance(seed);
    double opt = testoracle::flat_subset_opt(inst);
    RoundedSolution sol = greedy_add_solve(inst);
    CHECK(sol.total_cost >= opt - 1e-9);
    double rebuilt = 0.0;
    for (std::size_t i : sol.open_parents) rebuilt += inst.facilities[i].open_cost;
    for (std::size_t j = 0; j < inst.num_clients(); ++j)
      rebuilt += inst.dist(sol.assignment[j], j);
    CHECK(rebuilt == doctest::Approx(sol.total_cost).epsilon(1e-12));
  }
}

TEST_CASE("add-only baseline finds the optimum of the line cases") {
  Instance inst = line_instance({{0.5, 0.0}, {1.0, 6.0}}, {1.0, 5.0});
  CHECK(greedy_add_solve(inst).total_cost == doctest::Approx(3.5).epsilon(1e-12));
  Instance single = line_instance({{2.0, 0.0}}, {3.0, -5.0});
  CHECK(greedy_add_solve(single).total_cost == doctest::Approx(10.0).epsilon(1e-12));
}

}  // TEST_SUITE
