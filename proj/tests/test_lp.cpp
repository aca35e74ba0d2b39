#include <doctest.h>

#include <cmath>

#include "ufl/generators.hpp"
#include "ufl/instance.hpp"
#include "ufl/lp.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace ufl;

namespace {

Instance two_facility_line() {
  // Facility A (cost 0.5) at x=0, facility B (cost 1) at x=6,
  // clients at x=1 and x=5. Integral optimum opens both.
  Instance inst;
  inst.dim = 1;
  inst.facilities = {{0, 0.5, {0.0}}, {1, 1.0, {6.0}}};
  inst.clients = {{0, {1.0}}, {1, {5.0}}};
  return inst;
}

}  // namespace

TEST_SUITE("lp") {

TEST_CASE("single facility forces y = 1") {
  Instance inst;
  inst.dim = 1;
  inst.facilities = {{0, 2.0, {0.0}}};
  inst.clients = {{0, {3.0}}, {1, {-5.0}}};
  LpResult res = solve_relaxation(inst);
  CHECK(res.primal.objective == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(res.primal.y[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.primal.x_at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.primal.x_at(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.dual.objective == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("two facilities on a line") {
  LpResult res = solve_relaxation(two_facility_line());
  CHECK(res.primal.objective == doctest::Approx(3.5).epsilon(1e-12));
  CHECK(res.primal.y[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.primal.y[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.dual.objective == doctest::Approx(3.5).epsilon(1e-12));
}

TEST_CASE("triangle reduction splits every opening variable in half") {
  Instance inst = generate_hardness(testsupport::triangle_graph(), 1.0 / 3.0, 1.0);
  LpResult res = solve_relaxation(inst);
  CHECK(res.primal.objective == doctest::Approx(4.5).epsilon(1e-12));
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(res.primal.y[i] == doctest::Approx(0.5).epsilon(1e-9));
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(res.dec.Cstar[j] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(res.dec.Fstar[j] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(res.dec.vstar[j] == doctest::Approx(1.5).epsilon(1e-9));
  }
}

TEST_CASE("primal feasibility, duality gap and decomposition identities") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Instance inst = testsupport::small_instance(seed);
    LpResult res = solve_relaxation(inst);
    const auto& fs = res.primal;

    for (std::size_t j = 0; j < fs.n_clients; ++j) {
      double mass = 0.0;
      for (std::size_t i = 0; i < fs.n_facilities; ++i) {
        double xij = fs.x_at(i, j);
        CHECK(xij >= -1e-12);
        CHECK(xij <= fs.y[i] + 1e-9);
        mass += xij;
      }
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
    }

    double rebuilt = 0.0;
    for (std::size_t i = 0; i < fs.n_facilities; ++i)
      rebuilt += inst.facilities[i].open_cost * fs.y[i];
    for (const auto& [key, val] : fs.x) rebuilt += inst.dist(key.first, key.second) * val;
    CHECK(rebuilt == doctest::Approx(fs.objective).epsilon(1e-9));

    double scale = std::max(1.0, std::abs(fs.objective));
    CHECK(std::abs(fs.objective - res.dual.objective) / scale < 1e-6);

    // Dual feasibility.
    for (std::size_t i = 0; i < fs.n_facilities; ++i) {
      double wsum = 0.0;
      for (std::size_t j = 0; j < fs.n_clients; ++j) {
        double wij = res.dual.w_at(i, j);
        CHECK(wij >= -1e-9);
        CHECK(res.dual.v[j] - wij <= inst.dist(i, j) + 1e-7);
        wsum += wij;
      }
      CHECK(wsum <= inst.facilities[i].open_cost + 1e-7);
    }

    double vsum = 0.0, csum = 0.0;
    for (std::size_t j = 0; j < fs.n_clients; ++j) {
      CHECK(res.dec.Fstar[j] >= 0.0);
      CHECK(res.dec.Cstar[j] + res.dec.Fstar[j] ==
            doctest::Approx(res.dec.vstar[j]).epsilon(1e-12));
      vsum += res.dec.vstar[j];
      double conn = 0.0;
      for (std::size_t i = 0; i < fs.n_facilities; ++i)
        conn += inst.dist(i, j) * fs.x_at(i, j);
      CHECK(res.dec.Cstar[j] == doctest::Approx(conn).epsilon(1e-9));
      csum += conn;
    }
    CHECK(vsum == doctest::Approx(res.dual.objective).epsilon(1e-9));
    CHECK(csum <= fs.objective + 1e-9);
  }
}

TEST_CASE("relaxation value never exceeds the exhaustive flat optimum") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    Instance inst = testsupport::small_instance(seed);
    LpResult res = solve_relaxation(inst);
    double opt = testoracle::flat_subset_opt(inst);
    CHECK(res.primal.objective <= opt + 1e-9);
  }
}

TEST_CASE("support graph structure") {
  Instance inst = generate_hardness(testsupport::triangle_graph(), 1.0 / 3.0, 1.0);
  LpResult res = solve_relaxation(inst);
  SupportGraph g = support_graph(res.primal, 1e-9);
  REQUIRE(g.facility_clients.size() == 3);
  REQUIRE(g.client_facilities.size() == 3);
  // Every client fractionally uses exactly its two endpoint facilities.
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(g.client_facilities[j].size() == 2);
    CHECK(g.client_neighbors[j].size() == 2);  // triangle: everyone neighbors everyone
  }
  for (std::size_t i = 0; i < 3; ++i) CHECK(g.facility_clients[i].size() == 2);

  // A threshold above the solution's x values empties the graph.
  SupportGraph empty = support_graph(res.primal, 0.9);
  for (std::size_t j = 0; j < 3; ++j) CHECK(empty.client_facilities[j].empty());
}

TEST_CASE("tsv dump is deterministic and well-formed") {
  LpResult res = solve_relaxation(two_facility_line());
  std::string a = lp_dump_tsv(res.primal, res.dual);
  std::string b = lp_dump_tsv(res.primal, res.dual);
  CHECK(a == b);
  CHECK(a.find("x\t") != std::string::npos);
  CHECK(a.find("y\t") != std::string::npos);
  CHECK(a.find("v\t") != std::string::npos);
}

}  // TEST_SUITE
