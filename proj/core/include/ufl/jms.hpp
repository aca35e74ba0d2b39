#pragma once

#include <cstddef>
#include <vector>

#include "ufl/instance.hpp"
#include "ufl/rounding.hpp"

namespace ufl {

// Terminal state of the greedy dual-ascent run: per-client budgets frozen at
// first connection, the opened facility set, and the final connection from
// the run (before the nearest-open reassignment of the returned solution).
struct JmsState {
  double time = 0.0;
  std::vector<double> alpha;
  std::vector<char> open;          // per facility
  std::vector<long long> connected;  // per client, facility id (-1 while unconnected)

  // Current contribution of client j to facility i under the recontribution
  // rule: max(alpha_j - d, 0) while unconnected, max(d(sigma_j, j) - d, 0)
  // after connecting to sigma_j.
  double offer(const Instance& inst, std::size_t i, std::size_t j) const;
};

// Event-driven simulation of uniformly rising budgets. Unconnected clients
// contribute max(t - d, 0) toward unopened facilities, connected clients
// contribute their potential improvement; a facility opens exactly when the
// contributions cover its cost. Deterministic event order: time, then
// facility id, then client id.
JmsState jms_run(const Instance& inst);

// Runs the simulation and returns the integral solution with every client
// assigned to its nearest open facility.
RoundedSolution jms_solve(const Instance& inst);

// Add-only baseline: starts from the cheapest single-facility solution and
// keeps adding the facility with the largest strict decrease in total cost
// (ties: lowest id) until no addition improves it.
RoundedSolution greedy_add_solve(const Instance& inst);

}  // namespace ufl
