#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ufl/instance.hpp"
#include "ufl/lp.hpp"

namespace ufl {

// One piece of a split facility. ybar = gamma * ystar_share; every copy
// keeps a pointer to its parent facility for distances and opening costs.
struct FacilityCopy {
  std::size_t parent = 0;
  double ybar = 0.0;
  double ystar_share = 0.0;
};

// Scaled and split fractional solution, self-contained: it carries the
// parent-facility costs and the parent-client distance matrix so downstream
// stages never need the Instance again.
//
// Per client: close_set is the cheapest prefix of its used copies (sorted by
// distance, ties by copy id) holding exactly ybar-mass 1; distant_set is the
// rest of its used copies. Stats: Cval/Dval are mass-weighted averages over
// the close/distant sets, Mval the maximum close distance, and
// r/rprime the interpolation coefficients recovered from
//   Cval = Cstar - rprime*Fstar,  Dval = Cstar + r*Fstar,  rprime = (gamma-1)*r.
struct AugmentedSolution {
  double gamma = 1.0;
  std::size_t n_parents = 0;
  std::size_t n_clients = 0;
  std::vector<FacilityCopy> copies;
  std::vector<double> parent_cost;
  std::vector<std::vector<double>> dist;  // [parent][client]
  std::vector<std::vector<std::size_t>> close_set;    // copy ids, walk order
  std::vector<std::vector<std::size_t>> distant_set;  // copy ids, walk order
  std::vector<std::vector<std::size_t>> close_parents;  // sorted unique parents
  std::vector<double> Cval, Mval, Dval, r, rprime;
  std::vector<double> Cstar, Fstar;  // copied from the decomposition
  std::vector<Point> client_locations;

  double copy_dist(std::size_t copy_id, std::size_t j) const {
    return dist[copies[copy_id].parent][j];
  }
  double client_dist(std::size_t j1, std::size_t j2) const {
    return distance(client_locations[j1], client_locations[j2]);
  }
  // Cval + Mval, the clustering value of a client.
  double cm(std::size_t j) const { return Cval[j] + Mval[j]; }
};

// Builds the scaled/split solution. gamma must be at least 1; values up to
// the top of the production gamma mixture (2.016569) are accepted so the
// randomized pipeline can scale by any sampled gamma.
AugmentedSolution augment(const FractionalSolution& fs, const ClientDecomposition& dec,
                          double gamma, const Instance& inst);

// ystar-share-weighted mean distance from client j to a set of copies;
// 0 for an empty (or zero-mass) set.
double avg_distance(std::size_t j, const std::vector<std::size_t>& copy_ids,
                    const AugmentedSolution& aug);

// TSV rows: "client\tCval\tMval\tDval\tr".
std::string augment_dump_tsv(const AugmentedSolution& aug);

}  // namespace ufl
