#include "ufl/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "ufl/common.hpp"
#include "ufl/geometry.hpp"
#include "ufl/parallel.hpp"

namespace ufl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Depth-first include/exclude walk over facility subsets carrying the
// running per-client nearest distance, so each node costs O(clients).
struct SubsetScan {
  std::size_t nf = 0, nc = 0;
  const Instance* inst = nullptr;
  std::vector<std::vector<double>> d;       // [facility][client]
  std::vector<double> cur;                  // nearest open distance so far
  std::vector<std::vector<double>> saved;   // per-depth restore buffers
  bool with_table = false;
  std::vector<SubsetCost> table;
  double best = kInf;
  std::uint32_t best_mask = 0;
  bool found = false;
  bool allow_empty = false;

  void leaf(double fcost, std::uint32_t mask) {
    if (mask == 0 && !allow_empty) return;
    double csum = 0.0;
    for (std::size_t j = 0; j < nc; ++j) csum += cur[j];
    const double total = fcost + csum;
    if (mask != 0 && with_table) table.push_back({mask, fcost, csum});
    if (!found || total < best || (total == best && mask < best_mask)) {
      found = true;
      best = total;
      best_mask = mask;
    }
  }

  void run(std::size_t i, double fcost, std::uint32_t mask) {
    if (i == nf) {
      leaf(fcost, mask);
      return;
    }
    run(i + 1, fcost, mask);
    saved[i] = cur;
    for (std::size_t j = 0; j < nc; ++j) cur[j] = std::min(cur[j], d[i][j]);
    run(i + 1, fcost + inst->facilities[i].open_cost, mask | (1u << i));
    cur = saved[i];
  }
};

}  // namespace

OracleResult brute_force_opt(const Instance& inst, bool with_table) {
  const std::size_t nf = inst.num_facilities();
  const std::size_t nc = inst.num_clients();
  if (nf == 0) throw input_error("brute-force oracle needs at least one facility");
  if (nf > 20) throw input_error("brute-force oracle capped at 20 facilities");

  SubsetScan scan;
  scan.nf = nf;
  scan.nc = nc;
  scan.inst = &inst;
  scan.d.assign(nf, std::vector<double>(nc, 0.0));
  for (std::size_t i = 0; i < nf; ++i)
    for (std::size_t j = 0; j < nc; ++j) scan.d[i][j] = inst.dist(i, j);
  scan.cur.assign(nc, kInf);
  scan.saved.assign(nf, std::vector<double>(nc, 0.0));
  scan.with_table = with_table;
  scan.allow_empty = (nc == 0);
  if (scan.allow_empty) scan.cur.clear();
  scan.run(0, 0.0, 0);

  OracleResult out;
  out.opt_cost = scan.best;
  for (std::size_t i = 0; i < nf; ++i)
    if (scan.best_mask & (1u << i)) out.opt_set.push_back(i);
  if (with_table) {
    std::sort(scan.table.begin(), scan.table.end(),
              [](const SubsetCost& a, const SubsetCost& b) { return a.mask < b.mask; });
    out.table = std::move(scan.table);
  }
  return out;
}

BifactorCertificate certify_bifactor(const RoundedSolution& sol, const Instance& inst,
                                     double lambda_f, double lambda_c) {
  const std::size_t nf = inst.num_facilities();
  const std::size_t nc = inst.num_clients();
  if (nf == 0) throw input_error("bifactor certification needs at least one facility");
  if (nf > 16) throw input_error("bifactor certification capped at 16 facilities");

  std::vector<std::vector<double>> d(nf, std::vector<double>(nc, 0.0));
  for (std::size_t i = 0; i < nf; ++i)
    for (std::size_t j = 0; j < nc; ++j) d[i][j] = inst.dist(i, j);

  BifactorCertificate cert;
  cert.worst_margin = kInf;
  const double cost = sol.total_cost;
  const std::uint32_t top = (nf >= 32) ? 0xffffffffu : ((1u << nf) - 1u);
  for (std::uint32_t mask = 1; mask <= top; ++mask) {
    double fsum = 0.0;
    for (std::size_t i = 0; i < nf; ++i)
      if (mask & (1u << i)) fsum += inst.facilities[i].open_cost;
    double csum = 0.0;
    for (std::size_t j = 0; j < nc; ++j) {
      double m = kInf;
      for (std::size_t i = 0; i < nf; ++i)
        if (mask & (1u << i)) m = std::min(m, d[i][j]);
      csum += m;
    }
    const double bound = lambda_f * fsum + lambda_c * csum;
    const double margin = bound - cost;
    cert.worst_margin = std::min(cert.worst_margin, margin);
    if (cert.holds && cost > bound + 1e-9 * (1.0 + std::abs(bound))) {
      cert.holds = false;
      for (std::size_t i = 0; i < nf; ++i)
        if (mask & (1u << i)) cert.violator.push_back(i);
    }
  }
  return cert;
}

bool LemmaCheckReport::all_pass() const {
  for (const auto& c : checks)
    if (c.violations > 0) return false;
  return true;
}

namespace {

struct CheckAcc {
  LemmaCheck out;
  explicit CheckAcc(std::string name) {
    out.name = std::move(name);
    out.worst_margin = kInf;
  }
  void add(double margin, double tol) {
    ++out.applicable;
    out.worst_margin = std::min(out.worst_margin, margin);
    if (margin < -tol) ++out.violations;
  }
};

bool shares_close_parent(std::size_t a, std::size_t b, const AugmentedSolution& aug) {
  const auto& pa = aug.close_parents[a];
  const auto& pb = aug.close_parents[b];
  std::size_t x = 0, y = 0;
  while (x < pa.size() && y < pb.size()) {
    if (pa[x] == pb[y]) return true;
    if (pa[x] < pb[y])
      ++x;
    else
      ++y;
  }
  return false;
}

}  // namespace

LemmaCheckReport check_lemmas(const Instance& inst, const AugmentedSolution& aug,
                              const ClusteringResult& clustering, const ParamSet& params) {
  const double cmp = params.cmp_tol;
  const double g = aug.gamma;
  const std::size_t nc = aug.n_clients;
  const double pi = std::acos(-1.0);

  CheckAcc weird("weird_client_ratio");
  CheckAcc zfloor("reroute_distance_floor");
  CheckAcc cone("cone_mass_dominance");
  CheckAcc arm("small_arm_saving_floor");
  CheckAcc pick_avg("center_average_bound");
  CheckAcc net_avg("network_average_bound");
  CheckAcc farblk("far_block_membership");
  CheckAcc greedy_mb("greedy_member_bound");
  CheckAcc reward("interval_reward_total");

  const bool gamma_in_range = (g > 1.6 && g < 2.0);
  if (gamma_in_range) {
    const double theta = ParamSet::theta_for(g, params.K6);

    std::unordered_map<int, std::size_t> inv_by_id;
    for (std::size_t k = 0; k < clustering.invocations.size(); ++k)
      inv_by_id.emplace(clustering.invocations[k].id, k);

    auto in_band = [&](std::size_t j, double s) {
      const double v = aug.cm(j);
      return v >= s - cmp && v <= (1.0 + params.delta) * s + cmp;
    };

    // Weird clients carry almost all of their value in the distant tail; the
    // LP decomposition then forces connection cost below K6 times the
    // facility share.
    for (std::size_t j = 0; j < nc; ++j) {
      if (classify_normal(j, aug, params)) continue;
      weird.add(params.K6 * aug.Fstar[j] - aug.Cstar[j], cmp);
    }

    // Per normal-center pick: remote neighbors inside the value band keep
    // their rerouting vectors long (distance floor), the near-top cone
    // around the member direction carries a minority of the rerouting mass,
    // and small-arm members guarantee a floor on the best saving.
    const double zcoeff = std::min(0.99, 1.0 - (params.eps1 + params.delta) / theta);
    for (const auto& t : clustering.trace) {
      if (t.rule != SelectionRule::homo_normal) continue;
      auto it = inv_by_id.find(t.invocation);
      if (it == inv_by_id.end()) continue;
      const InvocationRecord& inv = clustering.invocations[it->second];
      const double s = inv.s;

      std::vector<std::size_t> arm_set;
      for (std::size_t j : t.nminus) {
        if (j == t.center || !in_band(j, s)) continue;
        const RerouteResult rr = reroute_cost(t.center, j, aug);
        if (rr.empty) continue;

        zfloor.add(rr.z - zcoeff * aug.Cval[t.center], cmp);

        std::vector<char> used(aug.copies.size(), 0);
        for (std::size_t cid : aug.close_set[j]) used[cid] = 1;
        for (std::size_t cid : aug.distant_set[j]) used[cid] = 1;
        double g1 = 0.0, g2 = 0.0;
        const Point& pc = aug.client_locations[t.center];
        const Point& pj = aug.client_locations[j];
        for (std::size_t cid : aug.close_set[t.center]) {
          const double dd = aug.copy_dist(cid, t.center);
          if (dd < 0.999 * rr.z - cmp || dd > aug.Mval[t.center] + cmp) continue;
          if (used[cid]) continue;
          const Point& pf = inst.facilities[aug.copies[cid].parent].location;
          const double ang = angle_at(pc, pj, pf);
          if (ang > pi - params.phi_r)
            g1 += aug.copies[cid].ystar_share;
          else
            g2 += aug.copies[cid].ystar_share;
        }
        cone.add(g1 - g2, cmp);

        if (classify_arm(t.center, j, aug, params)) arm_set.push_back(j);
      }

      if (!arm_set.empty()) {
        double best_saving = -kInf;
        for (std::size_t j : arm_set) {
          const SavingResult sr =
              saving_spending(j, t.selection_scope, aug, params, params.eps1);
          best_saving = std::max(best_saving, sr.saving);
        }
        const double bound =
            (s / 125.0) * (double(arm_set.size()) / double(params.M_cap));
        arm.add(best_saving - bound, cmp);
      }

      // Average rerouting bound of one max-saving pick over its in-band
      // members, applicable when they are connection-dominant at level K5.
      const Cluster& cl = clustering.clusters[t.cluster_index];
      double cst = 0.0, fst = 0.0;
      std::vector<std::size_t> inb;
      for (std::size_t j : cl.members) {
        if (!in_band(j, s)) continue;
        inb.push_back(j);
        cst += aug.Cstar[j];
        fst += aug.Fstar[j];
      }
      if (cst > params.K5 * fst + cmp) {
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t j : inb) {
          if (j != t.center) lhs += reroute_cost(t.center, j, aug).cost;
          rhs += (1.0 - params.eps2) * aug.Cval[j] + (3.0 - g) * aug.Mval[j] +
                 (g - 1.0) * aug.Dval[j];
        }
        pick_avg.add(rhs - lhs, cmp * (1.0 + std::abs(rhs)));
      }
    }

    // Average rerouting bound over a whole homogeneous invocation.
    std::vector<std::ptrdiff_t> center_of(nc, -1);
    for (const auto& cl : clustering.clusters)
      for (std::size_t j : cl.members) center_of[j] = std::ptrdiff_t(cl.center);
    for (const auto& inv : clustering.invocations) {
      if (inv.kind != InvocationKind::homogeneous) continue;
      double cst = 0.0, fst = 0.0;
      for (std::size_t j : inv.network) {
        cst += aug.Cstar[j];
        fst += aug.Fstar[j];
      }
      if (!(cst > params.K4 * fst + cmp)) continue;
      double lhs = 0.0, rhs = 0.0;
      bool complete = true;
      for (std::size_t j : inv.network) {
        if (center_of[j] < 0) {
          complete = false;
          break;
        }
        const std::size_t c = std::size_t(center_of[j]);
        if (j != c) lhs += reroute_cost(c, j, aug).cost;
        rhs += (1.0 - params.eps3) * aug.Cval[j] + (3.0 - g) * aug.Mval[j] +
               (g - 1.0) * aug.Dval[j];
      }
      if (!complete) continue;
      net_avg.add(rhs - lhs, cmp * (1.0 + std::abs(rhs)));
    }

    // Members that landed in a cluster whose center sits at least two value
    // bands below are cheap by the band geometry alone.
    const BlockSet bs = build_blocks(aug, params);
    std::vector<BlockIndex> band(nc, 0);
    for (const auto& b : bs.blocks)
      for (std::size_t j : b.clients) band[j] = b.index;
    const double dp = params.delta_prime;
    const double eps_fb = 2.0 * dp / (1.0 + dp);
    for (const auto& t : clustering.trace) {
      const Cluster& cl = clustering.clusters[t.cluster_index];
      const std::size_t c = cl.center;
      for (std::size_t j : cl.members) {
        if (j == c) continue;
        if (!shares_close_parent(c, j, aug)) continue;
        if (band[j] < band[c] + 2) continue;
        if (!((1.0 + dp) * aug.cm(c) <= aug.cm(j) + cmp)) continue;
        const double cost = reroute_cost(c, j, aug).cost;
        const double rhs = (1.0 - eps_fb) * aug.Cval[j] + (3.0 - g) * aug.Mval[j] +
                           (g - 1.0) * aug.Dval[j];
        farblk.add(rhs - cost, cmp);

        // Blocks two bands apart put the member in the center's low-cost
        // membership set; the greedy baseline below then applies a fortiori.
      }

      // Min-value centers give every member the unconditioned rerouting
      // baseline.
      if (t.rule == SelectionRule::greedy || t.rule == SelectionRule::homo_weird) {
        for (std::size_t j : cl.members) {
          if (j == c) continue;
          if (!(aug.cm(c) <= aug.cm(j) + cmp)) continue;
          const double cost = reroute_cost(c, j, aug).cost;
          const double rhs = aug.Cval[j] + (3.0 - g) * aug.Mval[j] +
                             (g - 1.0) * aug.Dval[j];
          greedy_mb.add(rhs - cost, cmp);
        }
      }
    }

    // Connection-dominant instances must leave a fixed fraction of the LP
    // connection mass as interval rewards.
    double cstar_tot = 0.0, fstar_tot = 0.0;
    for (std::size_t j = 0; j < nc; ++j) {
      cstar_tot += aug.Cstar[j];
      fstar_tot += aug.Fstar[j];
    }
    if (cstar_tot > params.K1 * fstar_tot + cmp) {
      const IntervalSet is = cut_intervals(bs, params);
      double total_reward = 0.0;
      for (const auto& iv : is.intervals) total_reward += iv.reward;
      reward.add(total_reward - cstar_tot / 1e5, cmp * (1.0 + cstar_tot));
    }
  }

  LemmaCheckReport rep;
  rep.checks = {weird.out,   zfloor.out, cone.out,      arm.out,   pick_avg.out,
                net_avg.out, farblk.out, greedy_mb.out, reward.out};
  return rep;
}

std::string lemma_report_tsv(const LemmaCheckReport& rep) {
  std::ostringstream os;
  os << "check\tapplicable\tviolations\tworst_margin\n";
  for (const auto& c : rep.checks) {
    os << c.name << '\t' << c.applicable << '\t' << c.violations << '\t'
       << format_double(c.worst_margin) << '\n';
  }
  return os.str();
}

void remote_arm_lhs(double gamma, double k, double l, double r, const ParamSet& params,
                    double& lhs1, double& lhs2) {
  const double x = params.K6;
  const double delta = params.delta;
  const double eps1 = params.eps1;
  const double xp1 = x + 1.0;

  const double W = gamma - 1.0 + l - k + delta;
  const double A1 =
      (gamma - 1.0) * (3.0 - 2.0 * l) + (l - k + delta) * (2.0 * gamma - 3.0) - eps1 * W;
  const double B1 =
      (gamma - 1.0) * r * ((1.0 + eps1) * W + (2.0 - k + delta) * (2.0 - gamma));
  const double A2 = 2.0 * (gamma - 1.0) * l;
  const double B2 = (gamma - 1.0) * (2.0 - gamma) * r * l;
  const double q1 = A1 * x + B1;
  const double q2 = A2 * x + B2;
  lhs1 = q1 * q1 + q2 * q2 - W * W * xp1 * xp1 / 0.995;

  const double A3 = (3.0 - 3.0 * delta + 2.0 * delta * gamma - 2.0 * l) / (1.0 + delta);
  const double B3 =
      (gamma - 1.0) * r *
      ((-(3.0 - gamma) * (1.0 - delta) + 2.0 * l) / (1.0 + delta) + eps1);
  const double A4 = 2.0 * l / (1.0 + delta);
  const double B4 = -2.0 * l * (gamma - 1.0) * r / (1.0 + delta);
  const double q3 = A3 * x + B3;
  const double q4 = A4 * x + B4;
  lhs2 = q3 * q3 + q4 * q4 - xp1 * xp1 / 0.995;
}

GridSearchReport appendix_grid_search(const ParamSet& params, double d) {
  if (!(d >= 1e-4 && d <= 1e-2))
    throw input_error("grid step must lie in [1e-4, 1e-2]");

  std::vector<double> gammas;
  for (long long i = 1;; ++i) {
    const double g = 1.6 + double(i) * d;
    if (g >= 2.0 - d * 1e-9) break;
    gammas.push_back(g);
  }
  const double k_top = (1.0 + params.delta) / 2.0;
  const long long n_r = (long long)std::floor(1.0 / d + 1e-9) + 1;

  struct Slice {
    double margin = kInf;
    double k = 0.0, l = 0.0, r = 0.0;
    long long count = 0;
    double k_lo = kInf, k_hi = -kInf, l_lo = kInf, l_hi = -kInf;
  };
  std::vector<Slice> slices(gammas.size());

  parallel_for(gammas.size(), [&](std::size_t gi) {
    const double g = gammas[gi];
    Slice& sl = slices[gi];
    const double th = ParamSet::theta_for(g, params.K6);
    for (long long ki = 0;; ++ki) {
      const double k = th + double(ki) * d;
      if (k > k_top + d * 1e-9) break;
      const double l_top = 1.0 - k + params.delta;
      bool k_any = false;
      for (long long li = 1;; ++li) {
        const double l = 0.99 * k + double(li) * d;
        if (l > l_top + d * 1e-9) break;
        for (long long ri = 0; ri < n_r; ++ri) {
          const double r = double(ri) * d;
          double lhs1 = 0.0, lhs2 = 0.0;
          remote_arm_lhs(g, k, l, r, params, lhs1, lhs2);
          const double m = std::max(lhs1 - 360.8 * d, lhs2 - 139.1 * d);
          ++sl.count;
          if (m < sl.margin) {
            sl.margin = m;
            sl.k = k;
            sl.l = l;
            sl.r = r;
          }
        }
        k_any = true;
        sl.l_lo = std::min(sl.l_lo, l);
        sl.l_hi = std::max(sl.l_hi, l);
      }
      if (k_any) {
        sl.k_lo = std::min(sl.k_lo, k);
        sl.k_hi = std::max(sl.k_hi, k);
      }
    }
  });

  GridSearchReport rep;
  rep.step = d;
  rep.min_robust_margin = kInf;
  rep.gamma_lo = kInf;
  rep.gamma_hi = -kInf;
  rep.k_lo = kInf;
  rep.k_hi = -kInf;
  rep.l_lo = kInf;
  rep.l_hi = -kInf;
  rep.r_lo = 0.0;
  rep.r_hi = double(n_r - 1) * d;
  for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
    const Slice& sl = slices[gi];
    if (sl.count == 0) continue;
    rep.point_count += sl.count;
    rep.gamma_lo = std::min(rep.gamma_lo, gammas[gi]);
    rep.gamma_hi = std::max(rep.gamma_hi, gammas[gi]);
    rep.k_lo = std::min(rep.k_lo, sl.k_lo);
    rep.k_hi = std::max(rep.k_hi, sl.k_hi);
    rep.l_lo = std::min(rep.l_lo, sl.l_lo);
    rep.l_hi = std::max(rep.l_hi, sl.l_hi);
    if (sl.margin < rep.min_robust_margin) {
      rep.min_robust_margin = sl.margin;
      rep.worst_gamma = gammas[gi];
      rep.worst_k = sl.k;
      rep.worst_l = sl.l;
      rep.worst_r = sl.r;
    }
  }
  return rep;
}

std::string grid_report_tsv(const GridSearchReport& rep) {
  std::ostringstream os;
  os << "step\t" << format_double(rep.step) << '\n';
  os << "gamma_range\t" << format_double(rep.gamma_lo) << '\t'
     << format_double(rep.gamma_hi) << '\n';
  os << "k_range\t" << format_double(rep.k_lo) << '\t' << format_double(rep.k_hi)
     << '\n';
  os << "l_range\t" << format_double(rep.l_lo) << '\t' << format_double(rep.l_hi)
     << '\n';
  os << "r_range\t" << format_double(rep.r_lo) << '\t' << format_double(rep.r_hi)
     << '\n';
  os << "points\t" << rep.point_count << '\n';
  os << "min_robust_margin\t" << format_double(rep.min_robust_margin) << '\n';
  os << "worst_point\t" << format_double(rep.worst_gamma) << '\t'
     << format_double(rep.worst_k) << '\t' << format_double(rep.worst_l) << '\t'
     << format_double(rep.worst_r) << '\n';
  return os.str();
}

}  // namespace ufl
