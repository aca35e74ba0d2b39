#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ufl/augment.hpp"
#include "ufl/clustering.hpp"
#include "ufl/instance.hpp"
#include "ufl/params.hpp"

namespace ufl {

// Integral solution over the original facilities. Copies opened by the
// lotteries collapse to their parents; each parent's cost is paid once and
// every client is assigned to the nearest open parent (ties: lowest id).
struct RoundedSolution {
  std::vector<std::size_t> open_copies;   // sorted copy ids (empty for exact solvers)
  std::vector<std::size_t> open_parents;  // sorted, deduplicated facility ids
  std::vector<std::size_t> assignment;    // per client, facility id
  double facility_cost = 0.0;
  double connection_cost = 0.0;
  double total_cost = 0.0;
  std::uint64_t rng_seed = 0;
};

// Per-client frequencies of the close-set / distant-set / neither opening
// events, plus cost moments over the trials.
struct RoundingDiagnostics {
  std::size_t trials = 0;
  std::vector<double> p_close, p_distant, p_far;
  double mean_cost = 0.0;
  double stderr_cost = 0.0;
  std::string branch;  // which pipeline produced the solution
};

// One lottery draw: per cluster center exactly one of its close copies opens
// (probability proportional to ybar, which sums to 1 there); every copy not
// close to any center opens independently with probability ybar.
RoundedSolution round_once(const AugmentedSolution& aug, const ClusteringResult& clustering,
                           std::uint64_t seed);

// Monte Carlo over independent per-trial streams derived from (seed, trial).
RoundingDiagnostics estimate(const AugmentedSolution& aug, const ClusteringResult& clustering,
                             std::size_t trials, std::uint64_t seed);

struct UnifactorTrialRecord {
  std::string branch;  // "jms", "conn" or "greedy"
  double gamma = 0.0;  // sampled gamma (0 for jms)
  double cost = 0.0;
};

struct UnifactorReport {
  std::size_t trials = 0;
  std::size_t jms_count = 0, conn_count = 0, greedy_count = 0;
  std::vector<UnifactorTrialRecord> records;
};

// Facility-dominant instances (sum C* <= K1 * sum F*) go to the greedy
// dual-ascent solver; otherwise the solution is scaled by gamma, clustered
// and rounded `trials` times. Returns the cheapest trial plus diagnostics
// aggregated over all trials.
std::pair<RoundedSolution, RoundingDiagnostics> run_bifactor(const Instance& inst,
                                                             const ParamSet& params,
                                                             double gamma,
                                                             std::size_t trials,
                                                             std::uint64_t seed);

// Randomized pipeline selection per trial: facility-dominant instances always
// use the dual-ascent solver; otherwise each trial either runs it with
// probability kappa2 or samples gamma from the gamma part of the production
// mixture, using the connection pipeline for gamma in [1.6, 2] and plain
// greedy clustering outside.
std::pair<RoundedSolution, UnifactorReport> run_unifactor(const Instance& inst,
                                                          const ParamSet& params,
                                                          std::size_t trials,
                                                          std::uint64_t seed);

// Conditional expectation check: over trials where at least one copy of A
// opens (independently with probability ybar), the mean distance from j to
// the nearest open copy must not exceed the ystar-weighted average distance
// plus three standard errors.
bool closest_open_bound_check(const AugmentedSolution& aug,
                              const std::vector<std::size_t>& copy_set, std::size_t j,
                              std::size_t trials, std::uint64_t seed);

// TSV rows "open <facility>", "assign <client> <facility>" and a cost footer.
std::string solution_dump_tsv(const RoundedSolution& sol);

}  // namespace ufl
