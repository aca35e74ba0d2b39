#include "ufl/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "ufl/common.hpp"
#include "ufl/game.hpp"
#include "ufl/jms.hpp"
#include "ufl/lp.hpp"
#include "ufl/parallel.hpp"
#include "ufl/rng.hpp"

namespace ufl {

namespace {

// Every client in exactly one cluster, every center a member of its own
// cluster. Throws input_error otherwise.
void check_partition(const ClusteringResult& clustering, std::size_t n_clients) {
  std::vector<char> seen(n_clients, 0);
  std::size_t covered = 0;
  for (const Cluster& c : clustering.clusters) {
    bool center_in = false;
    for (std::size_t j : c.members) {
      if (j >= n_clients || seen[j])
        throw input_error("clustering is not a partition of the clients");
      seen[j] = 1;
      ++covered;
      if (j == c.center) center_in = true;
    }
    if (!center_in) throw input_error("cluster center missing from its own member list");
  }
  if (covered != n_clients) throw input_error("clustering leaves clients unclustered");
}

// One lottery draw over the copies; open_copy receives the per-copy outcome.
// Draw order is fixed (clusters in order, then copy ids ascending) so a
// given engine state always yields the same solution.
RoundedSolution draw(const AugmentedSolution& aug, const ClusteringResult& clustering,
                     std::mt19937_64& eng, std::vector<char>& open_copy) {
  const std::size_t ncopies = aug.copies.size();
  std::vector<char> lottery_covered(ncopies, 0);
  for (const Cluster& c : clustering.clusters)
    for (std::size_t cid : aug.close_set[c.center]) lottery_covered[cid] = 1;

  open_copy.assign(ncopies, 0);
  for (const Cluster& c : clustering.clusters) {
    const std::vector<std::size_t>& cs = aug.close_set[c.center];
    double total = 0.0;
    for (std::size_t cid : cs) total += aug.copies[cid].ybar;
    if (!(total > 0.0)) throw solver_error("cluster center has no close mass");
    double u = uniform01(eng) * total;
    std::size_t chosen = cs.back();
    double acc = 0.0;
    for (std::size_t cid : cs) {
      acc += aug.copies[cid].ybar;
      if (u < acc) {
        chosen = cid;
        break;
      }
    }
    open_copy[chosen] = 1;
  }
  for (std::size_t cid = 0; cid < ncopies; ++cid) {
    if (lottery_covered[cid]) continue;
    double yb = aug.copies[cid].ybar;
    if (yb <= 0.0) continue;
    if (uniform01(eng) < yb) open_copy[cid] = 1;
  }

  RoundedSolution sol;
  std::vector<char> parent_open(aug.n_parents, 0);
  for (std::size_t cid = 0; cid < ncopies; ++cid)
    if (open_copy[cid]) {
      sol.open_copies.push_back(cid);
      parent_open[aug.copies[cid].parent] = 1;
    }
  for (std::size_t p = 0; p < aug.n_parents; ++p)
    if (parent_open[p]) {
      sol.open_parents.push_back(p);
      sol.facility_cost += aug.parent_cost[p];
    }
  if (aug.n_clients > 0 && sol.open_parents.empty())
    throw solver_error("no facility opened for a nonempty client set");

  sol.assignment.resize(aug.n_clients);
  for (std::size_t j = 0; j < aug.n_clients; ++j) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_p = 0;
    for (std::size_t p : sol.open_parents) {
      double d = aug.dist[p][j];
      if (d < best) {
        best = d;
        best_p = p;
      }
    }
    sol.assignment[j] = best_p;
    sol.connection_cost += best;
  }
  sol.total_cost = sol.facility_cost + sol.connection_cost;
  return sol;
}

struct SweepStats {
  std::vector<double> costs;
  std::vector<std::uint8_t> close_hit;    // [trial * n_clients + j]
  std::vector<std::uint8_t> distant_hit;  // set only when the close set missed
};

SweepStats sweep(const AugmentedSolution& aug, const ClusteringResult& clustering,
                 std::size_t trials, std::uint64_t seed) {
  const std::size_t nc = aug.n_clients;
  SweepStats st;
  st.costs.resize(trials);
  st.close_hit.assign(trials * nc, 0);
  st.distant_hit.assign(trials * nc, 0);
  parallel_for(trials, [&](std::size_t t) {
    std::mt19937_64 eng = make_engine(seed, t);
    std::vector<char> open_copy;
    RoundedSolution sol = draw(aug, clustering, eng, open_copy);
    st.costs[t] = sol.total_cost;
    for (std::size_t j = 0; j < nc; ++j) {
      bool close = false;
      for (std::size_t cid : aug.close_set[j])
        if (open_copy[cid]) {
          close = true;
          break;
        }
      if (close) {
        st.close_hit[t * nc + j] = 1;
        continue;
      }
      for (std::size_t cid : aug.distant_set[j])
        if (open_copy[cid]) {
          st.distant_hit[t * nc + j] = 1;
          break;
        }
    }
  });
  return st;
}

// Mean and standard error of the cost over trials (fixed summation order).
void cost_moments(const std::vector<double>& costs, double& mean, double& se) {
  const std::size_t n = costs.size();
  double sum = 0.0;
  for (double c : costs) sum += c;
  mean = sum / static_cast<double>(n);
  se = 0.0;
  if (n > 1) {
    double ss = 0.0;
    for (double c : costs) ss += (c - mean) * (c - mean);
    se = std::sqrt(ss / (static_cast<double>(n) * static_cast<double>(n - 1)));
  }
}

RoundingDiagnostics reduce(const SweepStats& st, std::size_t nc, std::size_t trials,
                           const std::string& branch) {
  RoundingDiagnostics diag;
  diag.trials = trials;
  diag.branch = branch;
  diag.p_close.assign(nc, 0.0);
  diag.p_distant.assign(nc, 0.0);
  diag.p_far.assign(nc, 0.0);
  for (std::size_t j = 0; j < nc; ++j) {
    std::size_t c = 0, d = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      c += st.close_hit[t * nc + j];
      d += st.distant_hit[t * nc + j];
    }
    diag.p_close[j] = static_cast<double>(c) / static_cast<double>(trials);
    diag.p_distant[j] = static_cast<double>(d) / static_cast<double>(trials);
    diag.p_far[j] = static_cast<double>(trials - c - d) / static_cast<double>(trials);
  }
  cost_moments(st.costs, diag.mean_cost, diag.stderr_cost);
  return diag;
}

std::size_t argmin_cost(const std::vector<double>& costs) {
  std::size_t best = 0;
  for (std::size_t t = 1; t < costs.size(); ++t)
    if (costs[t] < costs[best]) best = t;
  return best;
}

ParamSet with_gamma(const ParamSet& params, double gamma) {
  ParamSet p = params;
  p.gamma = gamma;
  p.theta = ParamSet::theta_for(gamma, p.K6);
  return p;
}

}  // namespace

RoundedSolution round_once(const AugmentedSolution& aug, const ClusteringResult& clustering,
                           std::uint64_t seed) {
  check_partition(clustering, aug.n_clients);
  std::mt19937_64 eng = make_engine(seed, 0);
  std::vector<char> open_copy;
  RoundedSolution sol = draw(aug, clustering, eng, open_copy);
  sol.rng_seed = seed;
  return sol;
}

RoundingDiagnostics estimate(const AugmentedSolution& aug, const ClusteringResult& clustering,
                             std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw input_error("estimate requires at least one trial");
  check_partition(clustering, aug.n_clients);
  SweepStats st = sweep(aug, clustering, trials, seed);
  return reduce(st, aug.n_clients, trials, "rounding");
}

std::pair<RoundedSolution, RoundingDiagnostics> run_bifactor(const Instance& inst,
                                                             const ParamSet& params,
                                                             double gamma,
                                                             std::size_t trials,
                                                             std::uint64_t seed) {
  if (inst.num_clients() == 0) {
    RoundedSolution sol;
    sol.rng_seed = seed;
    RoundingDiagnostics diag;
    diag.branch = "empty";
    return {sol, diag};
  }
  LpResult lp = solve_relaxation(inst, params.lp_tol);
  double cstar = 0.0, fstar = 0.0;
  for (double v : lp.dec.Cstar) cstar += v;
  for (double v : lp.dec.Fstar) fstar += v;
  if (cstar <= params.K1 * fstar) {
    RoundedSolution sol = jms_solve(inst);
    sol.rng_seed = seed;
    RoundingDiagnostics diag;
    diag.branch = "jms";
    diag.mean_cost = sol.total_cost;
    return {sol, diag};
  }

  if (trials < 1) throw input_error("run_bifactor requires at least one trial");
  ParamSet p2 = with_gamma(params, gamma);
  AugmentedSolution aug = augment(lp.primal, lp.dec, gamma, inst);
  ClusteringResult clustering = cluster_conn(aug, p2);
  check_partition(clustering, aug.n_clients);
  SweepStats st = sweep(aug, clustering, trials, seed);
  RoundingDiagnostics diag = reduce(st, aug.n_clients, trials, "conn");

  std::size_t best = argmin_cost(st.costs);
  std::mt19937_64 eng = make_engine(seed, best);
  std::vector<char> open_copy;
  RoundedSolution sol = draw(aug, clustering, eng, open_copy);
  sol.rng_seed = seed;
  return {sol, diag};
}

std::pair<RoundedSolution, UnifactorReport> run_unifactor(const Instance& inst,
                                                          const ParamSet& params,
                                                          std::size_t trials,
                                                          std::uint64_t seed) {
  if (inst.num_clients() == 0) {
    RoundedSolution sol;
    sol.rng_seed = seed;
    return {sol, UnifactorReport{}};
  }
  if (trials < 1) throw input_error("run_unifactor requires at least one trial");

  LpResult lp = solve_relaxation(inst, params.lp_tol);
  double cstar = 0.0, fstar = 0.0;
  for (double v : lp.dec.Cstar) cstar += v;
  for (double v : lp.dec.Fstar) fstar += v;

  UnifactorReport report;
  report.trials = trials;
  report.records.resize(trials);

  if (cstar <= params.K1 * fstar) {
    RoundedSolution sol = jms_solve(inst);
    sol.rng_seed = seed;
    report.jms_count = trials;
    for (std::size_t t = 0; t < trials; ++t)
      report.records[t] = UnifactorTrialRecord{"jms", 0.0, sol.total_cost};
    return {sol, report};
  }

  GammaDistribution mix = mu2(params.eps7);
  double jms_cost = jms_solve(inst).total_cost;

  // Replays trial t's stream; returns the solution only when wanted so the
  // cost sweep stays light.
  auto run_trial = [&](std::size_t t, RoundedSolution* out) {
    std::mt19937_64 eng = make_engine(seed, t);
    UnifactorTrialRecord rec;
    if (uniform01(eng) < mix.kappa) {
      rec = UnifactorTrialRecord{"jms", 0.0, jms_cost};
      if (out) *out = jms_solve(inst);
    } else {
      double g = mix.sample_gamma(uniform01(eng));
      AugmentedSolution aug = augment(lp.primal, lp.dec, g, inst);
      ClusteringResult clustering;
      if (g >= 1.6 && g <= 2.0) {
        clustering = cluster_conn(aug, with_gamma(params, g));
        rec.branch = "conn";
      } else {
        std::vector<std::size_t> all(aug.n_clients);
        for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
        clustering = cluster_greedy(all, aug, params);
        rec.branch = "greedy";
      }
      std::vector<char> open_copy;
      RoundedSolution sol = draw(aug, clustering, eng, open_copy);
      rec.gamma = g;
      rec.cost = sol.total_cost;
      if (out) *out = std::move(sol);
    }
    report.records[t] = rec;
  };

  parallel_for(trials, [&](std::size_t t) { run_trial(t, nullptr); });
  for (const UnifactorTrialRecord& rec : report.records) {
    if (rec.branch == "jms")
      ++report.jms_count;
    else if (rec.branch == "conn")
      ++report.conn_count;
    else
      ++report.greedy_count;
  }

  std::size_t best = 0;
  for (std::size_t t = 1; t < trials; ++t)
    if (report.records[t].cost < report.records[best].cost) best = t;
  RoundedSolution sol;
  run_trial(best, &sol);
  sol.rng_seed = seed;
  return {sol, report};
}

bool closest_open_bound_check(const AugmentedSolution& aug,
                              const std::vector<std::size_t>& copy_set, std::size_t j,
                              std::size_t trials, std::uint64_t seed) {
  double mass = 0.0;
  for (std::size_t cid : copy_set) mass += aug.copies[cid].ybar;
  if (!(mass > 0.0)) throw input_error("copy set carries no opening mass");
  if (trials < 1) throw input_error("closest_open_bound_check requires trials");

  std::size_t hits = 0;
  double sum = 0.0, comp = 0.0, sumsq = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 eng = make_engine(seed, t);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t cid : copy_set) {
      double yb = aug.copies[cid].ybar;
      if (yb <= 0.0) continue;
      if (uniform01(eng) < yb) best = std::min(best, aug.copy_dist(cid, j));
    }
    if (best < std::numeric_limits<double>::infinity()) {
      ++hits;
      double y = best - comp;
      double s = sum + y;
      comp = (s - sum) - y;
      sum = s;
      sumsq += best * best;
    }
  }
  if (hits == 0) return true;  // no conditioning event observed
  double mean = sum / static_cast<double>(hits);
  double se = 0.0;
  if (hits > 1) {
    double var = (sumsq - static_cast<double>(hits) * mean * mean) /
                 static_cast<double>(hits - 1);
    se = std::sqrt(std::max(var, 0.0) / static_cast<double>(hits));
  }
  double avg = avg_distance(j, copy_set, aug);
  return mean <= avg + 3.0 * se + 1e-12 * (1.0 + avg);
}

std::string solution_dump_tsv(const RoundedSolution& sol) {
  std::ostringstream out;
  for (std::size_t p : sol.open_parents) out << "open\t" << p << "\n";
  for (std::size_t j = 0; j < sol.assignment.size(); ++j)
    out << "assign\t" << j << "\t" << sol.assignment[j] << "\n";
  out << "facility_cost\t" << format_double(sol.facility_cost) << "\n";
  out << "connection_cost\t" << format_double(sol.connection_cost) << "\n";
  out << "total_cost\t" << format_double(sol.total_cost) << "\n";
  return out.str();
}

}  // namespace ufl
