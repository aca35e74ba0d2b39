#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ufl/instance.hpp"

namespace ufl {

// Optimal vertex of the relaxation
//   min sum d(i,j) x_ij + sum f_i y_i
//   s.t. sum_i x_ij = 1 for all j,  x_ij <= y_i,  x, y >= 0.
// x holds only strictly positive entries, keyed by (facility, client)
// positional index.
struct FractionalSolution {
  std::size_t n_facilities = 0;
  std::size_t n_clients = 0;
  std::map<std::pair<std::size_t, std::size_t>, double> x;
  std::vector<double> y;
  double objective = 0.0;

  double x_at(std::size_t i, std::size_t j) const {
    auto it = x.find({i, j});
    return it == x.end() ? 0.0 : it->second;
  }
};

// Matching dual optimum
//   max sum v_j  s.t.  sum_j w_ij <= f_i,  v_j - w_ij <= d(i,j),  w >= 0.
struct DualSolution {
  std::vector<double> v;
  std::map<std::pair<std::size_t, std::size_t>, double> w;
  double objective = 0.0;

  double w_at(std::size_t i, std::size_t j) const {
    auto it = w.find({i, j});
    return it == w.end() ? 0.0 : it->second;
  }
};

// Per-client split of the LP value: Cstar = fractional connection cost,
// Fstar = fractional facility cost (nonnegative), vstar = Cstar + Fstar.
struct ClientDecomposition {
  std::vector<double> Cstar;
  std::vector<double> Fstar;
  std::vector<double> vstar;
};

struct LpResult {
  FractionalSolution primal;
  DualSolution dual;
  ClientDecomposition dec;
  long long iterations = 0;
};

// Deterministic two-phase dense simplex (Bland's rule). Throws solver_error
// if the iteration cap is exceeded.
LpResult solve_relaxation(const Instance& inst, double lp_tol = 1e-9);

// Bipartite support structure of a fractional solution at a threshold:
// edge (i,j) iff x_ij > threshold; two distinct clients are neighbors iff
// they share an adjacent facility.
struct SupportGraph {
  std::vector<std::vector<std::size_t>> facility_clients;
  std::vector<std::vector<std::size_t>> client_facilities;
  std::vector<std::vector<std::size_t>> client_neighbors;  // sorted, no self
};

SupportGraph support_graph(const FractionalSolution& fs, double threshold);

// TSV dump: lines "x\ti\tj\tvalue", "y\ti\tvalue", "v\tj\tvalue",
// "w\ti\tj\tvalue".
std::string lp_dump_tsv(const FractionalSolution& fs, const DualSolution& dual);

}  // namespace ufl
