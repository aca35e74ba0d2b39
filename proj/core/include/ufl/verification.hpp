#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ufl/augment.hpp"
#include "ufl/clustering.hpp"
#include "ufl/instance.hpp"
#include "ufl/params.hpp"
#include "ufl/rounding.hpp"

namespace ufl {

// Opening and nearest-open connection cost of one facility subset, encoded
// as a bitmask over facility ids.
struct SubsetCost {
  std::uint32_t mask = 0;
  double facility_cost = 0.0;
  double connection_cost = 0.0;
  double total() const { return facility_cost + connection_cost; }
};

struct OracleResult {
  double opt_cost = 0.0;
  std::vector<std::size_t> opt_set;  // facility ids, ascending
  std::vector<SubsetCost> table;     // all subsets, ascending mask; only
                                     // filled when requested
};

// Exhaustive optimum over facility subsets (nearest-open assignment). The
// empty set competes only when the instance has no clients. At most 20
// facilities (input_error beyond).
OracleResult brute_force_opt(const Instance& inst, bool with_table = false);

struct BifactorCertificate {
  bool holds = true;
  std::vector<std::size_t> violator;  // facility ids of the first subset
                                      // violating the bound; empty if none
  double worst_margin = 0.0;          // min over subsets of bound - cost
};

// Checks cost(sol) <= lambda_f*F(T) + lambda_c*C(T) for every nonempty
// facility subset T. At most 16 facilities (input_error beyond).
BifactorCertificate certify_bifactor(const RoundedSolution& sol, const Instance& inst,
                                     double lambda_f, double lambda_c);

struct LemmaCheck {
  std::string name;
  long long applicable = 0;  // configurations where the hypotheses held
  long long violations = 0;
  double worst_margin = 0.0;  // min slack over applicable configurations
                              // (>= 0 passes); +inf when none apply
};

struct LemmaCheckReport {
  std::vector<LemmaCheck> checks;
  bool all_pass() const;
};

// Evaluates the structural inequalities behind the clustering analysis over
// every configuration in the trace whose hypotheses hold (hypotheses gated
// with cmp_tol slack; vacuous checks report applicable = 0).
LemmaCheckReport check_lemmas(const Instance& inst, const AugmentedSolution& aug,
                              const ClusteringResult& clustering, const ParamSet& params);

std::string lemma_report_tsv(const LemmaCheckReport& rep);

// Left-hand sides of the two remote-arm quadratic inequalities evaluated at
// x = K6; each inequality "holds" iff its LHS is negative. Shared by the
// grid search and every cross-check so the coefficient forms are transcribed
// exactly once.
void remote_arm_lhs(double gamma, double k, double l, double r, const ParamSet& params,
                    double& lhs1, double& lhs2);

struct GridSearchReport {
  double step = 0.0;
  double gamma_lo = 0.0, gamma_hi = 0.0;  // extreme grid values actually scanned
  double k_lo = 0.0, k_hi = 0.0;
  double l_lo = 0.0, l_hi = 0.0;
  double r_lo = 0.0, r_hi = 0.0;
  long long point_count = 0;
  double min_robust_margin = 0.0;  // +inf when the grid is empty
  double worst_gamma = 0.0, worst_k = 0.0, worst_l = 0.0, worst_r = 0.0;
};

// Scans gamma in (1.6, 2), k in [theta(gamma), (1+delta)/2],
// l in (0.99k, 1-k+delta], r in [0, 1] with step d per axis and evaluates
// both inequality LHS values at x = K6. The robust margin at a point is
// max(LHS1 - 360.8d, LHS2 - 139.1d); a strictly positive minimum certifies
// that no parameter cell can satisfy both inequalities simultaneously.
// Requires d in [1e-4, 1e-2] (input_error otherwise).
GridSearchReport appendix_grid_search(const ParamSet& params, double d);

std::string grid_report_tsv(const GridSearchReport& rep);

}  // namespace ufl
