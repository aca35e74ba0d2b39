#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ufl/augment.hpp"
#include "ufl/params.hpp"

namespace ufl {

// Raw value-band index; with the production delta_prime the spacing between
// occupied bands is astronomically large, so indices need 128 bits.
using BlockIndex = __int128;

std::string block_index_str(BlockIndex n);

// Rerouting geometry of client j relative to a candidate center jprime:
// cost = mean distance from j to the copies of jprime's close set not used
// by j at all, z = mean distance from jprime to the same set; (0,0) when
// that set is empty.
struct RerouteResult {
  double cost = 0.0;
  double z = 0.0;
  bool empty = true;
};

RerouteResult reroute_cost(std::size_t jprime, std::size_t j, const AugmentedSolution& aug);

// True iff the close-set average carries at least a theta fraction of the
// client's value: Cval >= theta*(Cval+Mval) - cmp_tol.
bool classify_normal(std::size_t j, const AugmentedSolution& aug, const ParamSet& params);

// True iff member j of center jprime has a small remote arm:
// (Cstar_j+Fstar_j)^2 < d^2 + (0.998 z)^2 - 2 d (0.998 z) sin(alpha),
// evaluated with cmp_tol slack.
bool classify_arm(std::size_t jprime, std::size_t j, const AugmentedSolution& aug,
                  const ParamSet& params);

// Threshold, membership sets and totals of one candidate center over an
// eligible client set. Nminus: eligible neighbors whose rerouting cost
// strictly exceeds their threshold; Nplus: all eligible clients at or below
// their threshold. saving/spending are the summed slacks/overruns.
struct SavingResult {
  std::vector<std::size_t> nplus;
  std::vector<std::size_t> nminus;
  double saving = 0.0;
  double spending = 0.0;
};

// Per-client membership threshold (1-eps)*Cval + (3-gamma)*Mval + (gamma-1)*Dval.
double member_threshold(std::size_t j, const AugmentedSolution& aug, double eps);

SavingResult saving_spending(std::size_t jprime, const std::vector<std::size_t>& eligible,
                             const AugmentedSolution& aug, const ParamSet& params,
                             double eps);

enum class SelectionRule { greedy, homo_normal, homo_weird };
std::string to_string(SelectionRule r);

enum class InvocationKind { greedy, homogeneous };

struct Cluster {
  std::size_t center = 0;
  std::vector<std::size_t> members;  // sorted, includes center
};

struct ClusterTrace {
  std::size_t cluster_index = 0;
  int invocation = 0;
  std::size_t center = 0;
  SelectionRule rule = SelectionRule::greedy;
  double saving = 0.0;    // over the selection scope (0 for greedy picks)
  double spending = 0.0;
  std::vector<std::size_t> nminus;           // at membership scope
  std::vector<std::size_t> selection_scope;  // remaining network at pick time
  std::vector<std::size_t> membership_scope; // remaining global at pick time
};

struct InvocationRecord {
  int id = 0;
  InvocationKind kind = InvocationKind::greedy;
  std::vector<std::size_t> network;  // network at invocation start
  double s = 0.0;                    // min Cval+Mval of the network
  BlockIndex interval_lo = 0, interval_hi = 0;
  double interval_reward = 0.0;
};

struct ClusteringResult {
  std::vector<Cluster> clusters;
  std::vector<ClusterTrace> trace;           // parallel to clusters
  std::vector<InvocationRecord> invocations;
};

// Repeatedly clusters the cheapest remaining network client (min Cval+Mval,
// ties by id) together with its unclustered neighbors from the membership
// scope. The 3-argument form uses the network itself as membership scope.
ClusteringResult cluster_greedy(const std::vector<std::size_t>& network,
                                const AugmentedSolution& aug, const ParamSet& params);
ClusteringResult cluster_greedy(const std::vector<std::size_t>& network,
                                const std::vector<std::size_t>& membership,
                                const AugmentedSolution& aug, const ParamSet& params);

// Requires the network to sit in one value band: every Cval+Mval within
// (1+delta) of the minimum (else input_error naming the violator). While
// normal clients remain, picks the one with maximum Saving over the
// remaining network (ties by id); otherwise falls back to min Cval+Mval.
// Cluster membership is Nplus-union-Nminus over the membership scope.
ClusteringResult cluster_homogeneous(const std::vector<std::size_t>& network,
                                     const AugmentedSolution& aug, const ParamSet& params);
ClusteringResult cluster_homogeneous(const std::vector<std::size_t>& network,
                                     const std::vector<std::size_t>& membership,
                                     const AugmentedSolution& aug, const ParamSet& params);

struct Block {
  BlockIndex index = 0;
  std::vector<std::size_t> clients;
  double Cstar_sum = 0.0;
  double Fstar_sum = 0.0;
};

struct BlockSet {
  std::vector<Block> blocks;  // ascending index; only occupied bands stored
  double s = 0.0;             // minimum positive Cval+Mval (0 if none)
};

// Value bands: index 0 holds Cval+Mval = 0; band n >= 1 holds values in
// [s*(1+delta')^{n-1}, s*(1+delta')^n).
BlockSet build_blocks(const AugmentedSolution& aug, const ParamSet& params);

struct Interval {
  BlockIndex lo = 0, hi = 0;  // raw band range, inclusive
  double reward = 0.0;
  std::vector<std::size_t> block_positions;  // into BlockSet::blocks
  BlockIndex size() const { return hi - lo + 1; }
};

struct IntervalSet {
  std::vector<Interval> intervals;  // ascending by lo
};

// Descending scan that accumulates connection and facility mass and cuts a
// range whenever the accumulated connection value c dominates the facility
// mass at the boundary band (c >= K3*(f + F(B_l)) with C(B_l) small
// relative to c); a range whose connection mass falls below K2*f is
// discarded, and ranges are clipped back by L bands when they reach length
// 2L. Discarded or never-visited bands end up as size-1 intervals with
// reward 0. A band-0 block is kept out of the scan (the scan models band 0
// as massless) and always becomes its own size-1 interval.
IntervalSet cut_intervals(const BlockSet& blocks, const ParamSet& params);

// Connection-dominant pipeline: requires sum Cstar > K1 * sum Fstar (else
// input_error). Builds blocks and intervals, then walks intervals in
// ascending value order clustering each interval's still-unclustered
// clients: homogeneous when the interval spans >= 2 bands and its remaining
// clients are connection-dominant at level K4, greedy otherwise. Membership
// always reaches over all still-unclustered clients.
ClusteringResult cluster_conn(const AugmentedSolution& aug, const ParamSet& params);

// TSV rows: cluster index, center, rule, saving, spending, members.
std::string clustering_dump_tsv(const ClusteringResult& res);

}  // namespace ufl
